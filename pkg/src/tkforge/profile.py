"""Scale profiles: every tunable constant of the pipeline in one place.

The asymptotic construction is phrased in powers of
``m = floor(ln^4(n/d))``, which are astronomically large for any graph
that fits in memory. A profile replaces each such quantity with a
runnable constant while keeping the structural relations between them.
``s0`` is the desk-scale default; :func:`paper_profile` records the
asymptotic values for documentation and is rejected by the runner.

Profiles serialise as ``key=value`` text, one per line.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from .errors import InputError, ParseError


@dataclass(frozen=True)
class ParamProfile:
    name: str = "s0"
    runnable: bool = True
    # expander and regime dispatch
    eps1: float = 0.001
    eps2: float = 0.2
    K: float = 64.0
    sparse_exponent: float = 1.0  # sparse regime when d < ln(n) ** sparse_exponent
    dense_threshold: float = 0.25  # dense when d(H) >= dense_threshold * |H|
    dense_min_order: int = 20
    # target subdivision
    target_t: int = 3
    target_ell: int = 299  # internal vertices per branch path; paths have target_ell + 1 edges
    # units
    h0: int = 4  # spokes of a branch unit
    h1: int = 6  # leaves per star
    ell_bound: int = 8  # spoke lengths are < ell_bound
    spoke_unit: int = 1  # unit size factor; fresh adjuster units get 3u + 2 spokes
    phase1_count: int = 8
    phase1_leaves: int = 16
    phase2_count: int = 64
    phase2_leaves: int = 8
    hub_threshold: int = 8
    unit_path_cap: int = 6
    # simple adjusters
    family_count: int = 24
    family_min: int = 4
    family_cap: int = 8
    adjuster_cap: int = 40
    # chaining and exact-length paths
    chain_lo: int = 280
    chain_step: int = 60
    k_floor: int = 8
    connect_cap: int = 10
    erosion_budget: int = 40  # |(int F1 u int F2) n W| allowed for one exact-length path
    unit_erosion: int = 20  # per-unit intersection allowed across the whole run
    q_candidates: int = 6
    retries: int = 2

    def __post_init__(self):
        ints = {f.name for f in fields(self) if f.type in ("int", int)}
        for key in ints:
            if getattr(self, key) < 0:
                raise InputError(f"profile field {key} must be nonnegative")
        if self.runnable:
            if self.target_ell < 1 or self.target_ell % 2 == 0:
                raise InputError("target_ell must be odd so that branch paths have even length")
            if self.target_t < 2:
                raise InputError("target_t must be at least 2")
            if self.phase1_leaves < self.phase2_leaves:
                raise InputError("phase1_leaves must be >= phase2_leaves")
            if self.phase2_leaves <= self.h1:
                raise InputError("phase2_leaves must exceed h1 (one leaf is lost to the spoke)")

    # -- derived quantities ------------------------------------------------
    @property
    def path_length(self) -> int:
        """Edges per branch path."""
        return self.target_ell + 1

    @property
    def chain_hi(self) -> int:
        return self.chain_lo + self.chain_step

    @property
    def adjuster_spokes(self) -> int:
        return 3 * self.spoke_unit + 2

    @property
    def chain_spokes(self) -> int:
        return 2 * self.spoke_unit

    def unit_shape(self, spokes: int | None = None):
        from .units import UnitShape

        return UnitShape(self.h0 if spokes is None else spokes, self.h1, self.ell_bound)

    def with_overrides(self, **kw) -> "ParamProfile":
        return replace(self, **kw)

    def dumps(self) -> str:
        return "".join(f"{k}={_render(v)}\n" for k, v in asdict(self).items())


def _render(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


S0 = ParamProfile()

BUILTIN = {"s0": S0}


def paper_profile(n: int, d: float) -> ParamProfile:
    """The asymptotic constants for an (n, d) instance; recorded, not runnable."""
    if n <= d or d <= 0:
        raise InputError("paper profile needs n > d > 0")
    m = max(1, math.floor(math.log(n / d) ** 4))
    sd = math.sqrt(d)
    big = lambda x: int(min(x, 10**18))  # noqa: E731
    return ParamProfile(
        name="paper",
        runnable=False,
        K=1e9,
        sparse_exponent=800.0,
        target_t=big(sd * m),
        target_ell=big(80 * m**3 - 1),
        h0=big(sd * m**6 + 1),
        h1=big(sd * m**22),
        ell_bound=big(10 * m),
        spoke_unit=big(sd * m**6),
        phase1_count=big(m**40),
        phase1_leaves=big(d / m**5),
        phase2_count=big(sd * m**49),
        phase2_leaves=big(sd * m**24),
        hub_threshold=big(sd * m**8),
        unit_path_cap=big(2 * m),
        family_count=big(d * m**26),
        family_min=big(d * m**25),
        family_cap=big(m),
        adjuster_cap=big(50 * m + 2),
        chain_lo=big(80 * m**3),
        chain_step=big(80 * m),
        k_floor=big(m**2),
        connect_cap=big(m),
        erosion_budget=big(sd * m**5),
        unit_erosion=big(sd * m**5 / 2),
    )


def loads(text: str) -> ParamProfile:
    """Parse ``key=value`` lines; ``base=<name>`` picks the starting profile."""
    types = {f.name: f.type for f in fields(ParamProfile)}
    values: dict = {}
    base = S0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected key=value", lineno)
        key, _, val = (s.strip() for s in line.partition("="))
        if key == "base":
            if val not in BUILTIN:
                raise ParseError(f"unknown base profile {val!r}", lineno)
            base = BUILTIN[val]
            continue
        if key not in types:
            raise ParseError(f"unknown profile key {key!r}", lineno)
        typ = types[key]
        try:
            if typ in ("bool", bool):
                if val.lower() not in ("true", "false"):
                    raise ValueError
                values[key] = val.lower() == "true"
            elif typ in ("int", int):
                values[key] = int(val)
            elif typ in ("float", float):
                values[key] = float(val)
            else:
                values[key] = val
        except ValueError:
            raise ParseError(f"bad value for {key}: {val!r}", lineno) from None
    try:
        return replace(base, **values)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def load(path_or_name: str) -> ParamProfile:
    """A builtin name (``s0``) or a path to a profile file."""
    if path_or_name in BUILTIN:
        return BUILTIN[path_or_name]
    with open(path_or_name) as fh:
        return loads(fh.read())
