from enum import Enum
from typing import List, Optional, Tuple

try:
    from pydantic.v1 import BaseModel, BaseSettings, Extra, Field, validator
except ImportError:
    from pydantic import BaseModel, BaseSettings, Extra, Field, validator
from sympy import isprime

DEFAULT_SEED = 0


def none_to_default(cls, v, field):
    if all(
        (
            # Cater for the occasion where field.default in (0, False)
            getattr(field, "default", None) is not None,
            v is None,
        )
    ):
        return field.default
    else:
        return v


def to_complex_pair(v):
    """Accept ``x``, ``[re, im]`` or ``{"re": .., "im": ..}`` and return ``(re, im)``."""
    if isinstance(v, dict):
        return (float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex values are given as [re, im], got {v!r}")
        return (float(v[0]), float(v[1]))
    if isinstance(v, complex):
        return (v.real, v.imag)
    return (float(v), 0.0)


class NormKind(str, Enum):
    sup = "sup"
    h2 = "h2"


class Embedding(str, Enum):
    l1 = "l1"
    l2 = "l2"


class UnimodularMethod(str, Enum):
    character = "character"
    random = "random"


class BudgetSettings(BaseModel):
    max_terms: int = Field(10_000_000, ge=1, description="""
Largest number of term products a single multiplication may form (|supp D|*|supp E|), and largest number of
terms a constructed series may hold.
""")
    max_seconds: float = Field(600.0, gt=0, description="Wall clock budget of a command, checked between pipeline stages.")
    max_primes: int = Field(2_000_000, ge=1000, description="Largest number of primes the prime table may grow to.")
    grid_points: int = Field(12_000_000, ge=1, description="""
Largest FFT grid used to bracket the polytorus sup norm of a small polynomial. Larger polynomials fall back to random
sampling with the coefficient-sum upper bound.
""")


class ConstructSettings(BaseModel):
    m: int = Field(2, ge=2, description="Homogeneity degree of the polynomial P.")
    p: int = Field(5, description="Prime block base, must be larger than ``m``. Block k holds p**k positions.")
    K: int = Field(4, ge=1, description="Number of blocks (truncation depth).")
    epsilon: float = Field(0.5, gt=0, description="The epsilon of the growth statement; fixes delta and the exponent r.")
    u: int = Field(3, ge=1, description="Offset of the progression {u + k*v : k >= 1}.")
    v: int = Field(2, ge=1, description="Step of the progression {u + k*v : k >= 1}.")
    safety_factor: float = Field(1.05, ge=1.0, description="Multiplier applied to theoretical norm bounds before comparing sampled norms.")
    method: UnimodularMethod = Field(UnimodularMethod.character, description="""
How the unimodular polynomials R_k are built.
``character`` uses additive characters of the field with p**k elements; ``random`` uses seeded random p-th roots of
unity with norm rejection.
""")
    samples: int = Field(64, ge=1, description="Random polytorus points used by sup norm estimates.")

    @validator("p")
    def _p_prime_above_m(cls, v, values):
        if not isprime(v):
            raise ValueError(f"p must be prime, got {v}")
        m = values.get("m")
        if m is not None and v <= m:
            raise ValueError(f"p must be larger than m (p={v}, m={m})")
        return v

    class Config:
        use_enum_values = True


class EmbedSettings(BaseModel):
    which: Embedding = Field(Embedding.l1, description="Which isometric embedding to build.")
    lambdas: List[Tuple[float, float]] = Field(default=[(1.0, 0.0)], description="""
Finite sequence lambda, each entry a number or a pair [re, im].
""")
    M_max: int = Field(4, ge=3, description="Largest homogeneity degree kept in the truncated image.")
    p: int = Field(5, description="Prime block base, must be larger than ``M_max``.")
    K: int = Field(1, ge=1, description="Blocks per polynomial. One block keeps the sup norm grid bracket affordable.")
    epsilon: float = Field(0.5, gt=0, description="epsilon used by the growth certificates of the building blocks.")
    slack_target: float = Field(0.1, gt=0, description="Relative gap allowed between the sup norm bracket ends.")
    samples: int = Field(64, ge=1, description="Random polytorus points used when the grid bracket does not fit the budget.")

    _normalize_lambdas = validator("lambdas", allow_reuse=True, pre=True, each_item=True)(to_complex_pair)

    @validator("p")
    def _p_prime_above_degrees(cls, v, values):
        if not isprime(v):
            raise ValueError(f"p must be prime, got {v}")
        m_max = values.get("M_max")
        if m_max is not None and v <= m_max:
            raise ValueError(f"p must be larger than M_max (p={v}, M_max={m_max})")
        return v

    class Config:
        use_enum_values = True


class BaseTerm(BaseModel):
    n: int = Field(ge=1, description="Dirichlet index")
    re: float = 0.0
    im: float = 0.0


class PerturbSettings(BaseModel):
    j: int = Field(1, ge=1, description="Bound on lambda: ||lambda||_inf <= j and |lambda_k| >= 1/j.")
    k: int = Field(2, ge=1, description="Length of lambda (highest power of D in D_lambda).")
    ell: float = Field(10.0, ge=0, description="Threshold the partial sums A_N(D_lambda, delta_m) must exceed.")
    m: int = Field(2, ge=2, description="Fixes delta_m = (m-1)/(2m).")
    epsilon: float = Field(0.5, description="Size of the perturbation, must be positive.")
    base: List[BaseTerm] = Field(
        default=[BaseTerm(n=1, re=1.0), BaseTerm(n=3, re=8.0)],
        description="The Dirichlet polynomial D1 being approximated, as a list of {n, re, im} terms.",
    )
    u: int = Field(1, ge=1, description="Offset of the progression Theta = {u + k*v : k >= 1}.")
    v: int = Field(1, ge=1, description="Step of the progression Theta.")
    p: Optional[int] = Field(None, description="Block base for D2. Defaults to the smallest prime above the degree of D2.")
    K: int = Field(1, ge=1, description="Blocks used for D2.")
    lambda_samples: int = Field(32, ge=1, description="Seeded samples of lambda, including the extreme points of the region.")
    shift_position: int = Field(1, ge=1, description="Position of the prime whose power shifts D4 (1 is the prime 2).")
    samples: int = Field(64, ge=1, description="Random polytorus points used by sup norm estimates.")

    @validator("epsilon")
    def _epsilon_positive(cls, v):
        if v <= 0:
            raise ValueError(f"epsilon must be positive, got {v}")
        return v

    @validator("p")
    def _p_prime(cls, v):
        if v is not None and not isprime(v):
            raise ValueError(f"p must be prime, got {v}")
        return v


class PolyTerm(BaseModel):
    exponents: List[int]
    re: float = 0.0
    im: float = 0.0

    @validator("exponents", each_item=True)
    def _nonnegative(cls, v):
        if v < 0:
            raise ValueError("exponents must be nonnegative")
        return v


class AlgebraSettings(BaseModel):
    generators: int = Field(3, ge=1, description="Number of generators, each supported on its own progression.")
    m: int = Field(2, ge=2, description="Generators are built with growth exponent delta_m ...")
    M: int = Field(3, ge=3, description="... and homogeneity degree M > m.")
    p: int = Field(5, description="Block base of the generators.")
    polynomial: List[PolyTerm] = Field(
        default=[
            {"exponents": [1, 1, 0], "re": 1.0},
            {"exponents": [0, 0, 2], "re": 1.0},
            {"exponents": [2, 0, 1], "re": -0.5},
        ],
        description="Polynomial Q without constant term, as a list of {exponents, re, im} terms.",
    )
    combinations: int = Field(50, ge=1, description="Seeded combinations checked for coefficient disjointness.")
    radius: float = Field(0.9, gt=0, lt=1, description="Per-coordinate sampling radius of the independence witness search.")
    threshold: float = Field(1e-8, gt=0, description="Smallest |Q(f(v0))| accepted as an independence witness.")
    samples: int = Field(64, ge=1, description="Points tried by the independence witness search.")

    @validator("p")
    def _p_prime(cls, v, values):
        if not isprime(v):
            raise ValueError(f"p must be prime, got {v}")
        M = values.get("M")
        if M is not None and v <= M:
            raise ValueError(f"p must be larger than M (p={v}, M={M})")
        return v

    @validator("M")
    def _M_above_m(cls, v, values):
        m = values.get("m")
        if m is not None and v <= m:
            raise ValueError(f"M must be larger than m (M={v}, m={m})")
        return v


class Settings(BaseSettings):
    """
    Configuration for bohrstrip runs.
    A run is reproducible from this configuration and its seed alone.
    """

    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64, description="Seed for every random choice of a run.")
    budgets: BudgetSettings = Field(default={}, description="Resource budgets.")
    # ``construct`` would shadow BaseModel.construct
    construct_: ConstructSettings = Field(
        default={}, alias="construct", env="bohrstrip_construct", description="Parameters of the ``construct`` command."
    )
    embed: EmbedSettings = Field(default={}, description="Parameters of the ``embed`` command.")
    perturb: PerturbSettings = Field(default={}, description="Parameters of the ``perturb`` command.")
    algebra: AlgebraSettings = Field(default={}, description="Parameters of the ``algebra`` command.")

    # Use validators to turn None to default value
    _normalize_budgets = validator("budgets", allow_reuse=True, pre=True)(none_to_default)
    _normalize_construct = validator("construct_", allow_reuse=True, pre=True)(none_to_default)
    _normalize_embed = validator("embed", allow_reuse=True, pre=True)(none_to_default)
    _normalize_perturb = validator("perturb", allow_reuse=True, pre=True)(none_to_default)
    _normalize_algebra = validator("algebra", allow_reuse=True, pre=True)(none_to_default)

    class Config:
        env_prefix = "bohrstrip_"
        env_nested_delimiter = "."
        case_sensitive = False
        use_enum_values = True
        extra = Extra.ignore
        allow_population_by_field_name = True
