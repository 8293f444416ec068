""" Pipelines behind the bohrstrip commands: build, certify, write canonical outputs, verify.
"""
import json
import logging
import os
import time
from typing import Dict, NamedTuple

from bohrstrip import primes, series
from bohrstrip.abscissa import bohr_cahen_sigma_a
from bohrstrip.algebra import (
    coefficient_stability,
    density_perturbation,
    disjointness_certificate,
    free_algebra_eval,
    growth_certificate_inequality,
    homogeneity_rules,
    independence_witness,
    ledger_certificate,
    MembershipQuery,
    membership_witness,
    sample_lambda_region,
)
from bohrstrip.blocks import disjoint_theta_family, make_blocks, Progression
from bohrstrip.certificates import INCONCLUSIVE, load_certificate, PASS, verify_certificate
from bohrstrip.constructors import certify_growth, construction_params, make_Dkm, make_P, norm_certificate
from bohrstrip.embeddings import embed_l1, embed_l2
from bohrstrip.errors import BudgetExceededError, InvalidInputError, ParseError
from bohrstrip.formats import growth_rows, polynomial_from_terms, polynomial_to_terms, read_series, series_to_dict, write_growth_csv, write_series
from bohrstrip.series import abs_sum_profile, bohr_transform, scale, Side, SparseSeries
from bohrstrip.settings import Embedding
from bohrstrip.util import canonical_json

log = logging.getLogger(__name__)

STABILITY_TAU = 1e-6


class RunReport(NamedTuple):
    outputs: Dict[str, str]
    verdicts: Dict[str, str]

    @property
    def passed(self):
        return all(verdict == PASS for verdict in self.verdicts.values())


def _pair(z):
    return [complex(z).real, complex(z).imag]


class Harness(object):
    """Run one command's pipeline under the budgets of ``settings`` and write its outputs to ``out_dir``."""

    def __init__(self, settings, out_dir=".", command=""):
        self.settings = settings
        self.out_dir = out_dir
        self.command = command
        self.started = time.monotonic()
        self.outputs = {}
        self.verdicts = {}
        series.MAX_TERMS = settings.budgets.max_terms
        primes.configure(settings.budgets.max_primes)

    @property
    def seed(self):
        return self.settings.seed

    def checkpoint(self, stage):
        elapsed = time.monotonic() - self.started
        log.debug("%s: %s done after %.2fs", self.command, stage, elapsed)
        if elapsed > self.settings.budgets.max_seconds:
            raise BudgetExceededError(f"{stage} finished after {elapsed:.1f}s, the time budget is {self.settings.budgets.max_seconds}s")

    def path(self, name):
        return os.path.join(self.out_dir, name)

    def _prepare(self):
        os.makedirs(self.out_dir, exist_ok=True)

    def write_series(self, name, D):
        write_series(self.path(name), D)
        self.outputs[name] = self.path(name)

    def write_json(self, name, obj):
        with open(self.path(name), "w") as fh:
            fh.write(canonical_json(obj, indent=2))
            fh.write("\n")
        self.outputs[name] = self.path(name)

    def write_certificate(self, name, certificate):
        with open(self.path(name), "w") as fh:
            fh.write(certificate.to_json())
        self.outputs[name] = self.path(name)
        self.verdicts[name] = certificate.verdict

    def write_growth_table(self, name, D, sigma):
        write_growth_csv(self.path(name), growth_rows(abs_sum_profile(D, sigma), sigma))
        self.outputs[name] = self.path(name)

    def report(self):
        return RunReport(outputs=dict(self.outputs), verdicts=dict(self.verdicts))

    def run_construct(self):
        """P = Q_1 + ... + Q_K on the progression, its Dirichlet series D and the growth and norm certificates."""
        cs = self.settings.construct_
        self._prepare()
        scheme = make_blocks(cs.u, cs.v, cs.p, cs.K, cs.m)
        params = construction_params(cs.m, cs.p, cs.K, cs.epsilon)
        P = make_P(scheme, params, method=cs.method, seed=self.seed)
        D = bohr_transform(P)
        self.checkpoint("polynomial")
        growth = certify_growth(D, scheme, params, seed=self.seed, command=self.command)
        self.checkpoint("growth certificate")
        norms = norm_certificate(D, scheme, params, safety_factor=cs.safety_factor, samples=cs.samples, seed=self.seed, command=self.command)
        self.checkpoint("norm certificate")
        estimate = bohr_cahen_sigma_a(D, certificate=growth)
        self.write_series("series.json", D)
        self.write_certificate("growth.json", growth)
        self.write_certificate("norms.json", norms)
        # the profile itself is in growth.csv
        self.write_json("abscissa.json", estimate.dict(exclude={"table"}))
        self.write_growth_table("growth.csv", D, params.dirichlet_exponent)
        return self.report()

    def run_embed(self):
        es = self.settings.embed
        self._prepare()
        if es.which == Embedding.l1.value:
            T, isometry = embed_l1(
                es.lambdas,
                M_max=es.M_max,
                K=es.K,
                p=es.p,
                epsilon=es.epsilon,
                slack_target=es.slack_target,
                samples=es.samples,
                seed=self.seed,
                grid_points=self.settings.budgets.grid_points,
                command=self.command,
            )
            self.checkpoint("l1 embedding")
            self.write_series("series.json", T)
            self.write_certificate("isometry_l1.json", isometry)
        else:
            T, isometry, orthonormality = embed_l2(es.lambdas, M_max=es.M_max, K=es.K, p=es.p, epsilon=es.epsilon, seed=self.seed, command=self.command)
            self.checkpoint("l2 embedding")
            self.write_series("series.json", T)
            self.write_certificate("isometry_l2.json", isometry)
            self.write_certificate("orthonormality.json", orthonormality)
        return self.report()

    def run_perturb(self):
        """Perturb the configured D1, then certify the homogeneity ledger, the growth inequality and membership."""
        ps = self.settings.perturb
        self._prepare()
        query = MembershipQuery(j=ps.j, k=ps.k, ell=ps.ell, m=ps.m)
        coefficients = {}
        for term in ps.base:
            coefficients[term.n] = coefficients.get(term.n, 0j) + complex(term.re, term.im)
        D1 = SparseSeries.from_indices(coefficients)
        result = density_perturbation(
            D1,
            ps.epsilon,
            query,
            Progression(ps.u, ps.v),
            p=ps.p,
            K=ps.K,
            shift_position=ps.shift_position,
            seed=self.seed,
            samples=ps.samples,
            grid_points=self.settings.budgets.grid_points,
            command=self.command,
        )
        self.checkpoint("perturbation")
        ledger = ledger_certificate(result, seed=self.seed, command=self.command)
        self.checkpoint("homogeneity ledger")
        lambdas = sample_lambda_region(query, ps.lambda_samples, seed=self.seed)
        growth = growth_certificate_inequality(result, query, lambdas, seed=self.seed, command=self.command)
        self.checkpoint("growth inequality")
        membership = membership_witness(result.D, query, lambdas, seed=self.seed, command=self.command)
        self.checkpoint("membership")
        self.write_series("series.json", result.D)
        # D2 at its own normalization, which its growth certificate was issued for
        self.write_series("d2_series.json", scale(2.0, result.D2))
        self.write_certificate("d2_growth.json", result.d2_certificate)
        self.write_json(
            "perturbation.json",
            {
                "query": query.to_dict(),
                "delta_m": query.delta_m,
                "w": result.w,
                "r": result.r,
                "degree_D2": result.degree_D2,
                "shift_prime": result.shift_prime,
                "epsilon": result.epsilon,
                "theta": {"u": ps.u, "v": ps.v},
                "theta_supported": result.theta_supported,
                "bounds": result.bounds,
                "components": {name: series_to_dict(getattr(result, name)) for name in ("D1", "D2", "D3", "D4")},
            },
        )
        self.write_certificate("homogeneity.json", ledger)
        self.write_certificate("perturbation_growth.json", growth)
        self.write_certificate("membership.json", membership)
        self.write_growth_table("growth.csv", result.D, query.delta_m)
        return self.report()

    def run_algebra(self):
        """Generators on disjoint progressions, Q evaluated by regrouping, independence and disjointness checks."""
        als = self.settings.algebra
        self._prepare()
        thetas = disjoint_theta_family(als.generators)
        generators = []
        generator_growth = []
        for theta in thetas:
            G, certificate = make_Dkm(theta, als.m, als.M, norm="h2", p=als.p, K=1, seed=self.seed, command=self.command)
            generators.append(G)
            generator_growth.append(certificate.verdict)
        self.checkpoint("generators")
        Q = polynomial_from_terms(als.polynomial)
        width = max((len(exps) for exps in Q), default=0)
        if width > als.generators:
            raise InvalidInputError(f"The polynomial has {width} variables but there are {als.generators} generators")
        Q = {exps + (0,) * (als.generators - len(exps)): coef for exps, coef in Q.items()}
        free = free_algebra_eval(generators, Q)
        self.checkpoint("polynomial evaluation")
        witness = independence_witness(generators, Q, samples=als.samples, radius=als.radius, threshold=als.threshold, seed=self.seed)
        total = series.add_many(generators, side=Side.dirichlet)
        disjointness = disjointness_certificate(total, thetas, als.combinations, seed=self.seed, command=self.command)
        self.checkpoint("disjointness")
        rules = homogeneity_rules(generators[0], generators[-1]) if len(generators) > 1 else homogeneity_rules(generators[0], generators[0])
        self.write_series("series.json", total)
        self.write_series("polynomial_series.json", free.series)
        self.write_certificate("disjointness.json", disjointness)
        self.write_json(
            "algebra.json",
            {
                "thetas": [theta.to_dict() for theta in thetas],
                "generator_growth": generator_growth,
                "polynomial": polynomial_to_terms(Q),
                "components": {str(e): len(L) for e, L in sorted(free.components.items())},
                "terms": len(free.series),
                "independence": None
                if witness is None
                else {
                    "sample": witness.sample,
                    "value": _pair(witness.value),
                    "values": [_pair(v) for v in witness.values],
                    "point": {str(pos): _pair(z) for pos, z in sorted(witness.point.items())},
                },
                "homogeneity_rules": rules,
                "coefficient_stability": coefficient_stability(generators[0], STABILITY_TAU, seed=self.seed),
            },
        )
        self.verdicts["independence"] = PASS if witness is not None else INCONCLUSIVE
        return self.report()


def read_certificate(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"Failed to parse certificate file {path}: {exc}")
    return load_certificate(data)


def verify(series_path, certificate_path):
    """Recompute the certificate from the series file alone."""
    D = read_series(series_path)
    certificate = read_certificate(certificate_path)
    if D.side is Side.power:
        D = bohr_transform(D)
    return verify_certificate(D, certificate)
