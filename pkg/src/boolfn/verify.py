"""Inequality and identity harness over function populations.

Checks are data: a name, a kind (``assert`` for proven statements, ``ratio``
for observed-constant reports, ``report`` for parametrized implications), and
a predicate over lazily computed measures. One registry feeds both the test
suite and the CLI, populations are enumerated or sampled deterministically,
and sweep aggregation is commutative so parallel runs match serial ones.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from . import algebra, chains, measures
from .core import TruthTable, dense_cap, depends_on_all, parse, popcounts, serialize

__all__ = [
    "CHECKS",
    "REGISTRY_VERSION",
    "Check",
    "CheckResult",
    "MeasureContext",
    "Population",
    "SweepReport",
    "enumerate_functions",
    "measure_matrix_rows",
    "resolve_checks",
    "run_check_suite",
    "run_single_check",
    "sample_functions",
]

REGISTRY_VERSION = "1"

DEFAULT_FAIL_LIMIT = 5


def enumerate_functions(n: int) -> Iterator[TruthTable]:
    """All 2**(2**n) truth tables on n variables, in packed-index order."""
    if n > 4:
        raise ValueError("exhaustive enumeration is limited to n <= 4")
    for i in range(1 << (1 << n)):
        yield TruthTable.from_packed_int(n, i)


def sample_functions(n: int, count: int, seed: int) -> Iterator[TruthTable]:
    """Deterministic pseudorandom tables: same seed, same stream."""
    if n > dense_cap():
        raise ValueError(f"arity {n} exceeds dense cap {dense_cap()}")
    rng = random.Random(seed)
    size = 1 << n
    for _ in range(count):
        yield TruthTable.from_packed_int(n, rng.getrandbits(size))


def standard_family_instances() -> list[TruthTable]:
    """Dense instances of every generated family at comfortable sizes.

    These ride along with sampled populations so the sweeps always include
    the structured witnesses, not just random tables.
    """
    from . import families

    out: list[TruthTable] = []
    for k in (1, 2, 3, 4):
        fn, _ = families.gap_family(k)
        if isinstance(fn, TruthTable):
            out.append(fn)
    for t in (1, 2):
        out.append(families.address(t))
    for n in range(1, 9):
        out.append(families.named_basics("parity", n))
        out.append(families.named_basics("or", n))
        out.append(families.named_basics("and", n))
    for n in (1, 3, 5, 7):
        out.append(families.named_basics("majority", n))
    for n in (4, 6):
        out.append(families.named_basics("threshold", n, threshold=n // 2))
    return out


@dataclass(frozen=True)
class Population:
    """Deterministic stream of functions: exhaustive, sampled, or explicit."""

    kind: str  # "exhaustive" | "sample" | "explicit"
    n: Optional[int] = None
    count: Optional[int] = None
    seed: Optional[int] = None
    members: tuple[str, ...] = ()

    @classmethod
    def exhaustive(cls, n: int) -> "Population":
        return cls(kind="exhaustive", n=n)

    @classmethod
    def sample(cls, n: int, count: int, seed: int) -> "Population":
        return cls(kind="sample", n=n, count=count, seed=seed)

    @classmethod
    def explicit(cls, tables: Iterable[TruthTable]) -> "Population":
        return cls(kind="explicit", members=tuple(serialize(t) for t in tables))

    def tables(self) -> Iterator[TruthTable]:
        if self.kind == "exhaustive":
            yield from enumerate_functions(self.n)
        elif self.kind == "sample":
            yield from sample_functions(self.n, self.count, self.seed)
        elif self.kind == "explicit":
            for text in self.members:
                yield parse(text)
        else:
            raise ValueError(f"unknown population kind {self.kind!r}")

    def size(self) -> int:
        if self.kind == "exhaustive":
            return 1 << (1 << self.n)
        if self.kind == "sample":
            return self.count
        return len(self.members)

    def descriptor(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "exhaustive":
            out["n"] = self.n
        elif self.kind == "sample":
            out.update(n=self.n, count=self.count, seed=self.seed)
        else:
            out["members"] = list(self.members)
        return out


class MeasureContext:
    """Lazy per-function measure cache shared by all checks."""

    def __init__(
        self,
        table: TruthTable,
        bs_cap: int = measures.BS_CAP_DEFAULT,
        cert_cap: int = measures.CERT_CAP_DEFAULT,
        dt_cap: int = measures.DT_CAP_DEFAULT,
    ) -> None:
        self.table = table
        self.n = table.n
        self.bs_cap = bs_cap
        self.cert_cap = cert_cap
        self.dt_cap = dt_cap
        self._cache: dict = {}

    def _memo(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    def fn_id(self) -> str:
        return self._memo("fn_id", lambda: serialize(self.table))

    def s(self) -> int:
        return self._memo("s", lambda: measures.sensitivity(self.table))

    def per_point_s(self) -> np.ndarray:
        return self._memo("pps", lambda: measures.per_point_sensitivity(self.table))

    def bs(self) -> Optional[int]:
        if self.n > self.bs_cap:
            return None
        return self._memo("bs", lambda: measures.block_sensitivity(self.table, cap=self.bs_cap))

    def cert(self) -> Optional[int]:
        if self.n > self.cert_cap:
            return None
        return self._memo(
            "C", lambda: measures.certificate_complexity(self.table, cap=self.cert_cap)
        )

    def influence(self) -> Fraction:
        return self._memo("I", lambda: measures.influence(self.table))

    def _alt_dc(self) -> measures.AltDecrease:
        return self._memo("altdc", lambda: measures.alternation_decrease(self.table))

    def alt(self) -> int:
        return self._alt_dc().alt

    def dc(self) -> int:
        return self._alt_dc().dc

    def witness(self) -> chains.Chain:
        return self._alt_dc().witness

    def dt(self) -> Optional[int]:
        if self.n > self.dt_cap:
            return None
        return self._memo("DT", lambda: measures.decision_tree_depth(self.table, cap=self.dt_cap))

    def poly(self) -> algebra.MultilinearPoly:
        return self._memo("poly", lambda: algebra.multilinear_coefficients(self.table))

    def deg(self) -> int:
        return self._memo("deg", lambda: self.poly().degree())

    def degm(self, m: int) -> int:
        def build():
            coeffs = self.poly().coeffs % m
            nz = np.nonzero(coeffs)[0]
            if nz.size == 0:
                return 0
            return int(popcounts(self.n)[nz].max())

        return self._memo(("degm", m), build)

    def deg2(self) -> int:
        return self.degm(2)

    def spectrum(self) -> algebra.FourierSpectrum:
        return self._memo("spec", lambda: algebra.fourier_transform(self.table))

    def sparsity(self) -> int:
        return self._memo("sparsity", lambda: self.spectrum().sparsity())

    def sums(self) -> algebra.SpectralSums:
        return self._memo("sums", lambda: algebra.spectral_sums_of(self.spectrum()))

    def depends_all(self) -> bool:
        return self._memo("dep", lambda: depends_on_all(self.table))

    def avg_s2(self) -> Fraction:
        def build():
            pps = self.per_point_s().astype(np.int64)
            return Fraction(int((pps * pps).sum()), 1 << self.n)

        return self._memo("avg_s2", build)


Outcome = tuple[str, dict]  # status in {"pass", "fail", "skip"}, observed values


@dataclass(frozen=True)
class Check:
    """A named registered check over one function's measures."""

    name: str
    kind: str  # "assert" | "ratio" | "report"
    description: str
    run: Callable[[MeasureContext], Outcome]


@dataclass
class CheckResult:
    """Outcome of one check on one function; failures carry the witness."""

    check: str
    fn_id: str
    status: str
    observed: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "check": self.check,
            "fn": self.fn_id,
            "status": self.status,
            "observed": {k: str(v) for k, v in self.observed.items()},
        }


def _check_s_le_bs(ctx: MeasureContext) -> Outcome:
    bs = ctx.bs()
    if bs is None:
        return "skip", {"reason": f"bs above cap {ctx.bs_cap}"}
    s = ctx.s()
    return ("pass" if s <= bs else "fail"), {"s": s, "bs": bs}


def _check_deg_bs_sandwich(ctx: MeasureContext) -> Outcome:
    bs = ctx.bs()
    if bs is None:
        return "skip", {"reason": f"bs above cap {ctx.bs_cap}"}
    deg = ctx.deg()
    ok = bs <= deg * deg and deg <= bs**3
    return ("pass" if ok else "fail"), {"bs": bs, "deg": deg}


def _check_influence_le_s(ctx: MeasureContext) -> Outcome:
    ok = ctx.influence() <= ctx.s()
    return ("pass" if ok else "fail"), {"I": ctx.influence(), "s": ctx.s()}


def _check_influence_le_deg(ctx: MeasureContext) -> Outcome:
    ok = ctx.influence() <= ctx.deg()
    return ("pass" if ok else "fail"), {"I": ctx.influence(), "deg": ctx.deg()}


def _check_deg_le_dt(ctx: MeasureContext) -> Outcome:
    dt = ctx.dt()
    if dt is None:
        return "skip", {"reason": f"DT above cap {ctx.dt_cap}"}
    ok = ctx.deg() <= dt
    return ("pass" if ok else "fail"), {"deg": ctx.deg(), "DT": dt}


def _check_alt_dc(ctx: MeasureContext) -> Outcome:
    alt, dc = ctx.alt(), ctx.dc()
    ok = alt in (2 * dc - 1, 2 * dc, 2 * dc + 1)
    return ("pass" if ok else "fail"), {"alt": alt, "dc": dc}


def _check_alt_le_exp_dt(ctx: MeasureContext) -> Outcome:
    dt = ctx.dt()
    if dt is None:
        return "skip", {"reason": f"DT above cap {ctx.dt_cap}"}
    ok = ctx.alt() <= (1 << (dt + 1)) - 1
    return ("pass" if ok else "fail"), {"alt": ctx.alt(), "DT": dt}


def _check_dc_le_exp_dt(ctx: MeasureContext) -> Outcome:
    dt = ctx.dt()
    if dt is None:
        return "skip", {"reason": f"DT above cap {ctx.dt_cap}"}
    ok = ctx.dc() <= (1 << dt) - 1
    return ("pass" if ok else "fail"), {"dc": ctx.dc(), "DT": dt}


def _check_cert_ge_bs(ctx: MeasureContext) -> Outcome:
    cert = ctx.cert()
    bs = ctx.bs()
    if cert is None or bs is None:
        return "skip", {"reason": f"bs/C above caps {ctx.bs_cap}/{ctx.cert_cap}"}
    # every certificate hits each disjoint sensitive block, so C >= bs >= s
    ok = ctx.s() <= bs <= cert
    return ("pass" if ok else "fail"), {"s": ctx.s(), "bs": bs, "C": cert}


def _check_negs_consistency(ctx: MeasureContext) -> Outcome:
    dc = ctx.dc()
    negs, negs_formula = measures.negation_complexity(ctx.table)
    expected = math.ceil(math.log2(1 + dc)) if dc else 0
    ok = negs == expected and negs_formula == dc
    return ("pass" if ok else "fail"), {"dc": dc, "negs": negs, "negs_formula": negs_formula}


def _deg_product_check(m: int) -> Callable[[MeasureContext], Outcome]:
    def run(ctx: MeasureContext) -> Outcome:
        deg = ctx.deg()
        bound = ctx.alt() * ctx.deg2() * ctx.degm(m)
        ok = deg <= bound
        return ("pass" if ok else "fail"), {
            "deg": deg,
            "alt": ctx.alt(),
            "deg2": ctx.deg2(),
            f"deg_{m}": ctx.degm(m),
        }

    return run


def _check_log_sparsity_le_2deg(ctx: MeasureContext) -> Outcome:
    ok = ctx.sparsity() <= 1 << (2 * ctx.deg())
    return ("pass" if ok else "fail"), {"sparsity": ctx.sparsity(), "deg": ctx.deg()}


def _check_deg2_le_log_sparsity(ctx: MeasureContext) -> Outcome:
    d2 = ctx.deg2()
    if d2 <= 1:
        return "skip", {"reason": "deg2 <= 1"}
    ok = (1 << d2) <= ctx.sparsity()
    return ("pass" if ok else "fail"), {"deg2": d2, "sparsity": ctx.sparsity()}


def _check_weighted_ge_n(ctx: MeasureContext) -> Outcome:
    if not ctx.depends_all():
        return "skip", {"reason": "does not depend on all inputs"}
    w = ctx.sums().weighted
    ok = w >= ctx.n
    return ("pass" if ok else "fail"), {"weighted": w, "n": ctx.n}


def _check_s_sqrt_sparsity(ctx: MeasureContext) -> Outcome:
    if not ctx.depends_all():
        return "skip", {"reason": "does not depend on all inputs"}
    s, sp = ctx.s(), ctx.sparsity()
    ok = s * s * sp >= ctx.n * ctx.n
    return ("pass" if ok else "fail"), {"s": s, "sparsity": sp, "n": ctx.n}


def _check_deg_exp_deg2(ctx: MeasureContext) -> Outcome:
    if not ctx.depends_all():
        return "skip", {"reason": "does not depend on all inputs"}
    ok = ctx.deg() * (1 << ctx.deg2()) >= ctx.n
    return ("pass" if ok else "fail"), {"deg": ctx.deg(), "deg2": ctx.deg2(), "n": ctx.n}


def _check_influence_le_alt_sqrt_n(ctx: MeasureContext) -> Outcome:
    i = ctx.influence()
    alt = ctx.alt()
    ok = i * i <= alt * alt * ctx.n
    return ("pass" if ok else "fail"), {"I": i, "alt": alt, "n": ctx.n}


def _check_influence_le_alt_deg2sq(ctx: MeasureContext) -> Outcome:
    i = ctx.influence()
    ok = i <= ctx.alt() * ctx.deg2() ** 2
    return ("pass" if ok else "fail"), {"I": i, "alt": ctx.alt(), "deg2": ctx.deg2()}


def _check_influence_fourier(ctx: MeasureContext) -> Outcome:
    lhs = ctx.influence()
    rhs = algebra.influence_from_spectrum(ctx.spectrum())
    return ("pass" if lhs == rhs else "fail"), {"I": lhs, "spectral": rhs}


def _check_weighted2_identity(ctx: MeasureContext) -> Outcome:
    lhs = ctx.sums().weighted2
    rhs = ctx.avg_s2()
    return ("pass" if lhs == rhs else "fail"), {"weighted2": lhs, "avg_s2": rhs}


def _check_parseval(ctx: MeasureContext) -> Outcome:
    scaled = ctx.spectrum().scaled
    if ctx.n <= 16:
        total = int((scaled * scaled).sum())
    else:
        total = sum(int(c) ** 2 for c in scaled[np.nonzero(scaled)[0]])
    ok = total == 1 << (2 * ctx.n)
    return ("pass" if ok else "fail"), {"sum_sq": total, "n": ctx.n}


def _check_witness_valid(ctx: MeasureContext) -> Outcome:
    w = ctx.witness()
    got = chains.alternation_along(ctx.table, w)
    ok = got == ctx.alt()
    return ("pass" if ok else "fail"), {"witness_alt": got, "alt": ctx.alt()}


def _check_decomposition(ctx: MeasureContext) -> Outcome:
    parts, negate = chains.monotone_decomposition(ctx.table)
    ok = len(parts) == ctx.alt()
    return ("pass" if ok else "fail"), {"parts": len(parts), "alt": ctx.alt(), "negated": negate}


def _ratio_bs(ctx: MeasureContext) -> Outcome:
    bs = ctx.bs()
    if bs is None:
        return "skip", {"reason": f"bs above cap {ctx.bs_cap}"}
    s, alt = ctx.s(), ctx.alt()
    denom = s * alt * alt
    if denom == 0:
        return "skip", {"reason": "s * alt^2 = 0"}
    return "pass", {"ratio": Fraction(bs, denom), "bs": bs, "s": s, "alt": alt}


def _ratio_sens_log(ctx: MeasureContext) -> Outcome:
    if not ctx.depends_all():
        return "skip", {"reason": "does not depend on all inputs"}
    if ctx.n < 2:
        return "skip", {"reason": "log2(n) = 0"}
    ratio = ctx.s() / math.log2(ctx.n)
    return "pass", {"ratio": ratio, "s": ctx.s(), "n": ctx.n}


def _report_deg_sparsity_exponent(c: float) -> Callable[[MeasureContext], Outcome]:
    # Tiny-n counterexamples exist (the implication needs large n), so this
    # stays a report rather than an assertion.
    def run(ctx: MeasureContext) -> Outcome:
        if ctx.n < 2:
            return "skip", {"reason": "log2(n) = 0"}
        deg = ctx.deg()
        if deg > math.log2(ctx.n) ** c:
            return "skip", {"reason": "hypothesis deg <= (log2 n)^c fails", "deg": deg}
        sp = ctx.sparsity()
        concl = deg <= (math.log2(sp) ** c if sp > 1 else 0.0)
        return ("pass" if concl else "fail"), {"deg": deg, "sparsity": sp, "c": c}

    return run


def _build_registry(sparsity_exponent: float = 2.0) -> dict[str, Check]:
    def A(name: str, description: str, run) -> Check:
        return Check(name=name, kind="assert", description=description, run=run)

    checks = [
        A("s-le-bs", "sensitivity at most block sensitivity", _check_s_le_bs),
        A("deg-bs-sandwich", "sqrt(bs) <= deg <= bs^3", _check_deg_bs_sandwich),
        A("influence-le-s", "influence at most sensitivity", _check_influence_le_s),
        A("influence-le-deg", "influence at most degree", _check_influence_le_deg),
        A("deg-le-dt", "degree at most decision-tree depth", _check_deg_le_dt),
        A("cert-ge-bs", "certificate complexity dominates block sensitivity", _check_cert_ge_bs),
        A("alt-dc-relation", "alt in {2dc-1, 2dc, 2dc+1}", _check_alt_dc),
        A("alt-le-exp-dt", "alt <= 2^(DT+1) - 1", _check_alt_le_exp_dt),
        A("dc-le-exp-dt", "dc <= 2^DT - 1", _check_dc_le_exp_dt),
        A("negs-from-decrease", "negation counts consistent with decrease", _check_negs_consistency),
        A("log-sparsity-le-2deg", "log2 sparsity at most twice degree", _check_log_sparsity_le_2deg),
        A(
            "deg2-le-log-sparsity",
            "deg2 at most log2 sparsity when deg2 > 1",
            _check_deg2_le_log_sparsity,
        ),
        A("spectral-weight-ge-n", "weighted spectral sum at least n", _check_weighted_ge_n),
        A("sens-sqrt-sparsity", "s * sqrt(sparsity) at least n", _check_s_sqrt_sparsity),
        A("deg-exp-deg2-lower", "deg at least n / 2^deg2", _check_deg_exp_deg2),
        A("influence-le-alt-sqrt-n", "influence at most alt * sqrt(n)", _check_influence_le_alt_sqrt_n),
        A("influence-le-alt-deg2sq", "influence at most alt * deg2^2", _check_influence_le_alt_deg2sq),
        A(
            "influence-fourier-identity",
            "influence equals the weighted spectral square sum",
            _check_influence_fourier,
        ),
        A(
            "sens-square-identity",
            "weighted2 spectral sum equals the mean squared sensitivity",
            _check_weighted2_identity,
        ),
        A("parseval", "scaled spectrum squares sum to 4^n", _check_parseval),
        A("witness-valid", "DP witness chain achieves alt", _check_witness_valid),
        A(
            "monotone-decomposition",
            "alt-many monotone parts reconstruct the function",
            _check_decomposition,
        ),
    ]
    for m in range(2, 7):
        checks.append(
            Check(
                name=f"deg-product-bound-m{m}",
                kind="assert",
                description=f"deg <= alt * deg2 * deg_{m}",
                run=_deg_product_check(m),
            )
        )
    checks.append(
        Check(name="bs-ratio", kind="ratio", description="observed bs / (s * alt^2)", run=_ratio_bs)
    )
    checks.append(
        Check(
            name="sens-log-ratio",
            kind="ratio",
            description="observed s / log2(n) on fully-dependent functions",
            run=_ratio_sens_log,
        )
    )
    checks.append(
        Check(
            name="deg-sparsity-exponent",
            kind="report",
            description="implication: deg <= (log2 n)^c gives deg <= (log2 sparsity)^c",
            run=_report_deg_sparsity_exponent(sparsity_exponent),
        )
    )
    return {c.name: c for c in checks}


CHECKS: dict[str, Check] = _build_registry()


def resolve_checks(checks: Sequence[str] | str = "all") -> list[Check]:
    if checks == "all":
        return list(CHECKS.values())
    resolved = []
    for name in checks:
        if name not in CHECKS:
            raise ValueError(f"unknown check name {name!r}")
        resolved.append(CHECKS[name])
    return resolved


def run_single_check(check: Check | str, table: TruthTable, **caps) -> CheckResult:
    """Run one check on one function (counterexample reproduction path)."""
    if isinstance(check, str):
        check = resolve_checks([check])[0]
    ctx = MeasureContext(table, **caps)
    status, observed = check.run(ctx)
    return CheckResult(check=check.name, fn_id=ctx.fn_id(), status=status, observed=observed)


@dataclass
class SweepReport:
    """Aggregated outcome of running checks over one population."""

    registry_version: str
    population: dict
    checks: dict

    @property
    def failed(self) -> bool:
        return any(
            agg["fail"] > 0 and agg["kind"] == "assert" for agg in self.checks.values()
        )

    def to_json_dict(self) -> dict:
        return {
            "registry_version": self.registry_version,
            "population": self.population,
            "checks": self.checks,
            "failed": self.failed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"population: {json.dumps(self.population, sort_keys=True)}"]
        for name in sorted(self.checks):
            agg = self.checks[name]
            line = (
                f"{name:28s} [{agg['kind']:6s}] pass={agg['pass']} "
                f"fail={agg['fail']} skip={agg['skip']}"
            )
            if agg.get("max_ratio") is not None:
                line += f" max_ratio={agg['max_ratio_float']:.4f} at {agg.get('max_ratio_fn')}"
            lines.append(line)
            for failure in agg.get("failures", []):
                lines.append(f"    counterexample {failure['fn']}: {failure['observed']}")
        lines.append("RESULT: " + ("FAIL" if self.failed else "OK"))
        return "\n".join(lines)


def _new_agg(kind: str) -> dict:
    return {
        "kind": kind,
        "pass": 0,
        "fail": 0,
        "skip": 0,
        "failures": [],
        "skip_reasons": {},
        "max_ratio": None,
        "max_ratio_fn": None,
    }


def _prune_failures(agg: dict, limit: int) -> None:
    if len(agg["failures"]) > 4 * limit:
        agg["failures"].sort(key=lambda item: item["fn"])
        del agg["failures"][limit:]


def _apply_outcome(
    agg: dict, check: Check, fn_id: str, status: str, observed: dict, fail_limit: int
) -> None:
    agg[status] += 1
    if status == "fail":
        agg["failures"].append(
            {"fn": fn_id, "observed": {k: str(v) for k, v in observed.items()}}
        )
        _prune_failures(agg, fail_limit)
    elif status == "skip":
        reason = str(observed.get("reason", "unspecified"))
        agg["skip_reasons"][reason] = agg["skip_reasons"].get(reason, 0) + 1
    if check.kind == "ratio" and status == "pass":
        ratio = observed["ratio"]
        current = agg["max_ratio"]
        if (
            current is None
            or ratio > current
            or (ratio == current and fn_id < agg["max_ratio_fn"])
        ):
            agg["max_ratio"] = ratio
            agg["max_ratio_fn"] = fn_id


def _merge_aggregates(lhs: dict, rhs: dict, fail_limit: int) -> dict:
    for name, agg in rhs.items():
        into = lhs.setdefault(name, _new_agg(agg["kind"]))
        into["pass"] += agg["pass"]
        into["fail"] += agg["fail"]
        into["skip"] += agg["skip"]
        into["failures"].extend(agg["failures"])
        _prune_failures(into, fail_limit)
        for reason, count in agg["skip_reasons"].items():
            into["skip_reasons"][reason] = into["skip_reasons"].get(reason, 0) + count
        if agg["max_ratio"] is not None:
            current = into["max_ratio"]
            if (
                current is None
                or agg["max_ratio"] > current
                or (agg["max_ratio"] == current and agg["max_ratio_fn"] < into["max_ratio_fn"])
            ):
                into["max_ratio"] = agg["max_ratio"]
                into["max_ratio_fn"] = agg["max_ratio_fn"]
    return lhs


def _finalize_aggregates(aggregates: dict, fail_limit: int) -> dict:
    out = {}
    for name in sorted(aggregates):
        agg = aggregates[name]
        failures = sorted(agg["failures"], key=lambda item: item["fn"])[:fail_limit]
        entry = {
            "kind": agg["kind"],
            "pass": agg["pass"],
            "fail": agg["fail"],
            "skip": agg["skip"],
            "failures": failures,
            "skip_reasons": dict(sorted(agg["skip_reasons"].items())),
            "max_ratio": None,
        }
        if agg["max_ratio"] is not None:
            entry["max_ratio"] = str(agg["max_ratio"])
            entry["max_ratio_float"] = float(agg["max_ratio"])
            entry["max_ratio_fn"] = agg["max_ratio_fn"]
        out[name] = entry
    return out


def _run_chunk(
    population: Population,
    check_names,
    start: int,
    stop: Optional[int],
    caps: dict,
    fail_limit: int,
) -> dict:
    selected = resolve_checks(check_names)
    aggregates = {c.name: _new_agg(c.kind) for c in selected}
    stream = population.tables()
    for _ in range(start):
        next(stream)
    index = start
    for table in stream:
        if stop is not None and index >= stop:
            break
        ctx = MeasureContext(table, **caps)
        fn_id = ctx.fn_id()
        for check in selected:
            status, observed = check.run(ctx)
            _apply_outcome(aggregates[check.name], check, fn_id, status, observed, fail_limit)
        index += 1
    return aggregates


def run_check_suite(
    population: Population,
    checks: Sequence[str] | str = "all",
    jobs: int = 1,
    fail_limit: int = DEFAULT_FAIL_LIMIT,
    bs_cap: int = measures.BS_CAP_DEFAULT,
    cert_cap: int = measures.CERT_CAP_DEFAULT,
    dt_cap: int = measures.DT_CAP_DEFAULT,
) -> SweepReport:
    """Run the named checks on every population member and aggregate.

    Aggregation is commutative (counts add, extrema and retained witnesses
    are order-independent), so fanning out over workers produces the same
    report as a serial run.
    """
    selected = resolve_checks(checks)
    names = "all" if checks == "all" else tuple(c.name for c in selected)
    caps = {"bs_cap": bs_cap, "cert_cap": cert_cap, "dt_cap": dt_cap}
    total = population.size()
    if jobs <= 1 or total < 2 * jobs:
        aggregates = _run_chunk(population, names, 0, None, caps, fail_limit)
    else:
        import multiprocessing as mp

        bounds = [(total * i) // jobs for i in range(jobs + 1)]
        args = [
            (population, names, bounds[i], bounds[i + 1], caps, fail_limit)
            for i in range(jobs)
            if bounds[i] < bounds[i + 1]
        ]
        ctx = mp.get_context("fork")
        with ctx.Pool(processes=len(args)) as pool:
            partials = pool.starmap(_run_chunk, args)
        aggregates = {}
        for part in partials:
            _merge_aggregates(aggregates, part, fail_limit)
    return SweepReport(
        registry_version=REGISTRY_VERSION,
        population=population.descriptor(),
        checks=_finalize_aggregates(aggregates, fail_limit),
    )


_MATRIX_COLUMNS = (
    "fn",
    "n",
    "s",
    "bs",
    "C",
    "I",
    "alt",
    "dc",
    "DT",
    "negs",
    "negs_formula",
    "deg",
    "deg2",
    "sparsity",
)


def measure_matrix_rows(
    population: Population,
    bs_cap: int = measures.BS_CAP_DEFAULT,
    cert_cap: int = measures.CERT_CAP_DEFAULT,
    dt_cap: int = measures.DT_CAP_DEFAULT,
) -> Iterator[list]:
    """Per-function measure matrix (header row first), for CSV export."""
    yield list(_MATRIX_COLUMNS)
    for table in population.tables():
        ctx = MeasureContext(table, bs_cap=bs_cap, cert_cap=cert_cap, dt_cap=dt_cap)
        bs = ctx.bs()
        cert = ctx.cert()
        dt = ctx.dt()
        yield [
            ctx.fn_id(),
            ctx.n,
            ctx.s(),
            "" if bs is None else bs,
            "" if cert is None else cert,
            str(ctx.influence()),
            ctx.alt(),
            ctx.dc(),
            "" if dt is None else dt,
            ctx.dc().bit_length(),
            ctx.dc(),
            ctx.deg(),
            ctx.deg2(),
            ctx.sparsity(),
        ]
