""" Run configuration loading and validation
"""
import contextlib
import logging

try:
    from pydantic.v1 import ValidationError
except ImportError:
    from pydantic import ValidationError
from yaml import safe_load, YAMLError

import bohrstrip.io
from bohrstrip.errors import InvalidInputError, ParseError
from bohrstrip.settings import Settings
from bohrstrip.util import recursive_update

log = logging.getLogger(__name__)

SECTIONS = ("budgets", "construct", "embed", "perturb", "algebra")


@contextlib.contextmanager
def config_manager(config_file=None, section=None, seed=None):
    yield ConfigManager(config_file=config_file, section=section, seed=seed)


class ConfigManager(object):
    """Merge config files over the defaults, route flat keys to the command's section and validate.

    Config files are YAML or JSON. Besides the nested form (``{"construct": {"m": 2}}``) a flat form
    (``{"m": 2, "p": 5, "seed": 7}``) is accepted, whose non-section keys belong to ``section``.
    """

    def __init__(self, config_file=None, section=None, seed=None):
        self.section = section
        self.config_files = []
        self.__config_dict = {}
        if isinstance(config_file, str):
            config_file = [config_file]
        for cf in config_file or ():
            self.load_config_file(cf)
        if seed is not None:
            self.__config_dict["seed"] = seed
        self.settings = self.__validate(self.__config_dict)
        bohrstrip.io.debug(f"Resolved configuration: {self.settings.dict(by_alias=True)}")

    def load_config_file(self, config_file):
        with open(config_file) as config_fh:
            try:
                config_dict = safe_load(config_fh)
            except YAMLError as exc:
                raise ParseError(f"Failed to parse config {config_file}: {exc}")
        if config_dict is None:
            config_dict = {}
        if type(config_dict) is not dict:
            raise ParseError(f"Config file does not look like a bohrstrip configuration file: {config_file}")
        log.debug("Loaded config file %s", config_file)
        self.config_files.append(config_file)
        self.load_config_dict(config_dict)

    def load_config_dict(self, config_dict):
        nested = {}
        flat = {}
        for key, value in config_dict.items():
            if key in SECTIONS or key == "seed":
                nested[key] = value
            else:
                flat[key] = value
        if flat:
            if self.section is None:
                log.debug("Ignoring top level keys without a command section: %s", sorted(flat))
            else:
                # flat budget keys are accepted next to the command parameters
                budget_keys = {k: flat.pop(k) for k in ("max_terms", "max_seconds", "max_primes", "grid_points") if k in flat}
                nested = recursive_update(nested, {self.section: flat})
                if budget_keys:
                    nested = recursive_update(nested, {"budgets": budget_keys})
        self.__config_dict = recursive_update(self.__config_dict, nested)

    @staticmethod
    def __validate(config_dict):
        try:
            return Settings(**config_dict)
        except ValidationError as exc:
            # report the validation error without a traceback
            raise InvalidInputError(str(exc))

    def get_section(self, name=None):
        name = name or self.section
        for field in self.settings.__fields__.values():
            if field.alias == name:
                return getattr(self.settings, field.name)
        raise InvalidInputError(f"Unknown configuration section: {name}")

    @property
    def seed(self):
        return self.settings.seed

    @property
    def budgets(self):
        return self.settings.budgets
