"""Batch runner: executes the check suites for one (g, L) and builds reports.

Checks are grouped into independent tasks that run on a thread pool; the
report lists them in task order, so the output never depends on
scheduling.  All randomness is derived from the configured seed.
"""
from __future__ import annotations

import csv
import io
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

from .cache import open_cache
from .errors import BudgetExceeded, InputError
from .fox.cover import build_cover_complex, h1_dims
from .fox.identities import (verify_commutator_identities, verify_cover_dims, verify_fox_fundamental,
                             verify_I_structure)
from .groupring import (boundary_T2, boundary_T3, psi_image, rho, theta, verify_case3_cancellation,
                        verify_case4_telescoping)
from .lattice import (LatticeParams, ZlVector, content, enumerate_iso_uni_pairs, is_isotropic, is_unimodular,
                      pairing, sp_orbit_count_bfs, sp_orbits, tau, transvections)
from .linalg import rank
from .presentation import (Workspace, counting_identities, verify_claims, verify_eliminatev3,
                           verify_newrelation1, verify_newrelation2, verify_presentation, verify_psiinjective,
                           verify_v1injective)
from .presentation.lemmas import EXACT_COL_CAP, NotTranslationClosed, dim_b1
from .report import Check, Report, count_check, make_check, skipped

SUITES = ("lattice", "ring", "fox", "presentation")
MODES = ("exact", "modular", "hybrid")
#: quantifiers over at most this many tuples are checked exhaustively
EXHAUSTIVE_LIMIT = 20_000
#: the BFS orbit/content cross-check is exhaustive up to this |H_L|
ORBIT_CROSSCHECK_LIMIT = 5000
#: exhaustive word length for the commutator identities at g = 1
FOX_EXHAUSTIVE_LEN = 4
DIMS_HEADER = ("g", "L", "h1_closed", "c_closed", "h1_bounded", "c_bounded", "i_dim", "tau", "orbits",
               "rank_psi_v1", "dim_b1", "quotient_dim_v")
SKIP = "skipped-budget"


@dataclass
class SuiteConfig:
    g: int
    L: int
    suites: tuple[str, ...] = ("all",)
    mode: str = "hybrid"
    sample_count: int = 1000
    seed: int = 0
    cache_dir: str | None = None
    report_path: str | None = None
    worker_count: int = 1
    exact_col_cap: int = EXACT_COL_CAP

    def __post_init__(self):
        self.suites = tuple(self.suites)
        bad = set(self.suites) - set(SUITES) - {"all"}
        if bad:
            raise InputError(f"unknown suites {sorted(bad)}")
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if self.sample_count < 1 or self.worker_count < 1:
            raise InputError("sample_count and worker_count must be positive")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        self.params = LatticeParams(self.g, self.L)

    @property
    def selected(self) -> tuple[str, ...]:
        return SUITES if "all" in self.suites else tuple(s for s in SUITES if s in self.suites)

    def echo(self) -> dict:
        d = asdict(self)
        d["suites"] = list(self.selected)
        return d


Task = tuple[str, Callable[[], list[Check]]]


def _rng(cfg: SuiteConfig, tag: str) -> random.Random:
    return random.Random(f"{tag}:{cfg.seed}:{cfg.g}:{cfg.L}")


def _vec(p: LatticeParams, rng: random.Random) -> ZlVector:
    return ZlVector.from_index(p, rng.randrange(p.size))


def _tuples(cfg: SuiteConfig, k: int, tag: str) -> tuple[Iterable[tuple[ZlVector, ...]], bool]:
    """All k-tuples of vectors when small enough, else seeded samples."""
    p = cfg.params
    if p.size ** k <= EXHAUSTIVE_LIMIT:
        vs = [ZlVector.from_index(p, i) for i in range(p.size)]

        def every(depth):
            if depth == 0:
                yield ()
                return
            for rest in every(depth - 1):
                for v in vs:
                    yield rest + (v,)
        return every(k), True
    rng = _rng(cfg, tag)
    return [tuple(_vec(p, rng) for _ in range(k)) for _ in range(cfg.sample_count)], False


# -- lattice -------------------------------------------------------------------------------------

def lattice_tasks(cfg: SuiteConfig) -> list[Task]:
    p, L = cfg.params, cfg.L

    def orbits():
        return [make_check("lattice.orbit-count", tau(L), sp_orbit_count_bfs(p))]

    def orbit_contents():
        if p.size > ORBIT_CROSSCHECK_LIMIT:
            raise BudgetExceeded(f"|H_L| = {p.size} exceeds the cross-check limit")
        orbs = sp_orbits(p)
        per_orbit = [{content(ZlVector.from_index(p, i)) for i in o} for o in orbs]
        mixed = [f"orbit of size {len(o)} has contents {sorted(c)}" for o, c in zip(orbs, per_orbit) if len(c) != 1]
        labels = [min(c) for c in per_orbit]
        return [make_check("lattice.orbits-are-contents",
                           {"mixed_orbits": 0, "distinct_contents": len(orbs)},
                           {"mixed_orbits": len(mixed), "distinct_contents": len(set(labels))}, witnesses=mixed)]

    def antisymmetry():
        tuples, _ = _tuples(cfg, 2, "antisym")
        seen, bad = 0, []
        for x, y in tuples:
            seen += 1
            if (pairing(x, y) + pairing(y, x)) % L:
                bad.append(f"{x.label()} {y.label()}")
        return [count_check("lattice.pairing-antisymmetric", seen, bad)]

    def bilinearity():
        tuples, _ = _tuples(cfg, 3, "bilinear")
        seen, bad = 0, []
        for x, y, z in tuples:
            seen += 1
            if pairing(x + y, z) != (pairing(x, z) + pairing(y, z)) % L:
                bad.append(f"{x.label()} {y.label()} {z.label()}")
        return [count_check("lattice.pairing-bilinear", seen, bad)]

    def content_unimodular():
        bad = []
        for i in range(1, p.size):
            v = ZlVector.from_index(p, i)
            if (content(v) == 1) != is_unimodular([v]):
                bad.append(v.label())
        return [count_check("lattice.content-unimodular", p.size - 1, bad)]

    def transvection_pairing():
        rng = _rng(cfg, "transvection")
        gens = transvections(p)
        bad = []
        for _ in range(cfg.sample_count):
            t, x, y = rng.choice(gens), _vec(p, rng), _vec(p, rng)
            if pairing(t(x), t(y)) != pairing(x, y):
                bad.append(f"d={t.direction.label()} x={x.label()} y={y.label()}")
        return [count_check("lattice.transvections-preserve-pairing", cfg.sample_count, bad)]

    def iso_uni_pairs():
        pairs = enumerate_iso_uni_pairs(p)
        bad = [f"{a.label()} {b.label()}" for a, b in pairs
               if a == b or not is_isotropic([a, b]) or not is_unimodular([a, b])]
        return [count_check("lattice.iso-uni-pairs", len(pairs), bad)]

    return [("lattice.orbit-count", orbits), ("lattice.orbits-are-contents", orbit_contents),
            ("lattice.pairing-antisymmetric", antisymmetry), ("lattice.pairing-bilinear", bilinearity),
            ("lattice.content-unimodular", content_unimodular),
            ("lattice.transvections-preserve-pairing", transvection_pairing),
            ("lattice.iso-uni-pairs", iso_uni_pairs)]


# -- group ring ----------------------------------------------------------------------------------

def _ring_quantifier(cfg: SuiteConfig, k: int, tag: str):
    """Exhaustive at g = 1 when small; seeded samples otherwise."""
    p = cfg.params
    if p.g == 1 and p.size ** k <= EXHAUSTIVE_LIMIT:
        return _tuples(cfg, k, tag)[0]
    rng = _rng(cfg, tag)
    return [tuple(_vec(p, rng) for _ in range(k)) for _ in range(cfg.sample_count)]


def ring_tasks(cfg: SuiteConfig) -> list[Task]:
    p = cfg.params

    def case3():
        seen, bad = 0, []
        for f, y, z in _ring_quantifier(cfg, 3, "case3"):
            seen += 1
            if not verify_case3_cancellation(p, f, y, z):
                bad.append(f"f={f.label()} y={y.label()} z={z.label()}")
        return [count_check("ring.case3-cancellation", seen, bad)]

    def case4():
        seen, bad = 0, []
        for f, x, y, z in _ring_quantifier(cfg, 4, "case4"):
            seen += 1
            if not verify_case4_telescoping(p, f, x, y, z):
                bad.append(f"f={f.label()} x={x.label()} y={y.label()} z={z.label()}")
        return [count_check("ring.case4-telescoping", seen, bad)]

    def augmentation():
        rng = _rng(cfg, "augmentation")
        bad = []
        for _ in range(cfg.sample_count):
            f, x, y, z = (_vec(p, rng) for _ in range(4))
            if boundary_T2(f, y, z).augmentation() != 0 or boundary_T3(f, x, y, z).augmentation() != 0:
                bad.append(f"f={f.label()} x={x.label()} y={y.label()} z={z.label()}")
            if psi_image(f, y, z, check=False).augmentation() != 0:
                bad.append(f"psi f={f.label()} y={y.label()} z={z.label()}")
        return [count_check("ring.boundary-augmentation-zero", cfg.sample_count, bad)]

    def theta_invariance():
        rng = _rng(cfg, "theta")
        th = theta(p)
        bad = []
        for k in range(min(cfg.sample_count, 200)):
            e = rho(_vec(p, rng), rng.randint(-5, 5)) + rho(_vec(p, rng), rng.randint(-5, 5))
            if th * e != th.scale(e.augmentation()):
                bad.append(f"sample-{k}")
        return [count_check("ring.theta-invariant", min(cfg.sample_count, 200), bad)]

    def splitting():
        rng = _rng(cfg, "decompose")
        bad = []
        count = min(cfg.sample_count, 200)
        for k in range(count):
            e = rho(_vec(p, rng), rng.randint(-5, 5)) - rho(_vec(p, rng), rng.randint(-5, 5))
            triv, ideal = e.decompose()
            t2, i2 = ideal.decompose()
            if triv + ideal != e or ideal.augmentation() != 0 or not t2.is_zero() or i2 != ideal:
                bad.append(f"sample-{k}")
        return [count_check("ring.decompose-splitting", count, bad)]

    return [("ring.case3-cancellation", case3), ("ring.case4-telescoping", case4),
            ("ring.boundary-augmentation-zero", augmentation), ("ring.theta-invariant", theta_invariance),
            ("ring.decompose-splitting", splitting)]


# -- fox calculus and covers -------------------------------------------------------------------

def fox_tasks(cfg: SuiteConfig) -> list[Task]:
    p = cfg.params
    samples = max(cfg.sample_count, 500)

    def commutators():
        if p.g == 1 and p.L == 2:
            return verify_commutator_identities(p, exhaustive_len=FOX_EXHAUSTIVE_LEN)
        return verify_commutator_identities(p, samples, cfg.seed)

    return [("fox.cover", lambda: verify_cover_dims(p)),
            ("fox.identify-i", lambda: verify_I_structure(p)),
            ("fox.commutator", commutators),
            ("fox.fundamental-identity", lambda: [verify_fox_fundamental(p, samples, cfg.seed)])]


# -- presentation of A_g -------------------------------------------------------------------------

def presentation_tasks(cfg: SuiteConfig) -> list[Task]:
    state: dict = {}

    def workspace() -> Workspace:
        if "error" in state:
            raise state["error"]
        if "ws" not in state:
            try:
                state["ws"] = Workspace(cfg.params, cfg.mode, cfg.seed, cfg.exact_col_cap)
            except BudgetExceeded as exc:
                state["error"] = exc
                raise
        return state["ws"]

    def build():
        ws = workspace()
        ws.span()  # the relation span is shared by every later task
        return []

    tasks = [("presentation.workspace", build)]
    for name, fn in (("presentation", verify_presentation), ("lemma.v1injective", verify_v1injective),
                     ("lemma.newrelation1", verify_newrelation1), ("lemma.eliminatev3", verify_eliminatev3),
                     ("lemma.newrelation2", verify_newrelation2), ("lemma.psiinjective", verify_psiinjective),
                     ("claim", verify_claims)):
        tasks.append((name, (lambda fn=fn: fn(workspace()))))
    tasks.append(("counting", counting_identities))
    return tasks


TASK_BUILDERS = {"lattice": lattice_tasks, "ring": ring_tasks, "fox": fox_tasks, "presentation": presentation_tasks}


def _run_task(name: str, fn: Callable[[], list[Check]]) -> list[Check]:
    t = time.perf_counter()
    try:
        out = fn()
    except (BudgetExceeded, NotTranslationClosed) as exc:
        out = [skipped(name, str(exc))]
    ms = int((time.perf_counter() - t) * 1000)
    for c in out:
        if not c.millis:
            c.millis = ms
    return out


def _warm_cache(cfg: SuiteConfig) -> None:
    """Persist the large matrices of this configuration for later reuse."""
    cache = open_cache(cfg.cache_dir)
    if not cfg.cache_dir:
        return
    p = cfg.params
    for name, build in _cached_objects(p, cfg):
        try:
            cache.get(p, name, build)
        except BudgetExceeded:
            pass


def _cached_objects(p: LatticeParams, cfg: SuiteConfig):
    def d1():
        return build_cover_complex(p, False).d1

    def relators():
        return build_cover_complex(p, False).relator_translates

    def psi(family):
        def build():
            ws = Workspace(p, cfg.mode, cfg.seed, cfg.exact_col_cap)
            return ws.pres.psi_matrix(sorted(set().union(*(ws.catalog[f] for f in family))))
        return build

    return [("d1", d1), ("relator_translates", relators),
            ("psi_v1", psi(["V1"])), ("psi_v", psi(["V1", "V2", "V3"]))]


def run_suite(cfg: SuiteConfig) -> Report:
    """Run the selected suites; write the JSON report when a path is configured."""
    prefix = f"g{cfg.g}_L{cfg.L}/"
    tasks: list[Task] = []
    for suite in cfg.selected:
        tasks.extend(TASK_BUILDERS[suite](cfg))
    # presentation tasks share one workspace, which is built before the pool starts
    results: list[list[Check] | None] = [None] * len(tasks)
    for i, (name, fn) in enumerate(tasks):
        if name == "presentation.workspace":
            results[i] = _run_task(name, fn)
    rest = [i for i in range(len(tasks)) if results[i] is None]
    with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
        futures = {i: pool.submit(_run_task, *tasks[i]) for i in rest}
        for i, fut in futures.items():
            results[i] = fut.result()
    checks = []
    for group in results:
        for c in group or []:
            c.name = prefix + c.name
            checks.append(c)
    _warm_cache(cfg)
    report = Report(cfg.echo(), checks)
    if cfg.report_path:
        write_report(report, cfg.report_path)
    return report


def run_many(configs: list[SuiteConfig], report_path: str | None = None) -> Report:
    """Run several configurations and merge them into one report."""
    checks = []
    for cfg in configs:
        checks.extend(run_suite(cfg).checks)
    echo = configs[0].echo() if len(configs) == 1 else {"configurations": [c.echo() for c in configs]}
    report = Report(echo, checks)
    if report_path:
        write_report(report, report_path)
    return report


def write_report(report: Report, path) -> None:
    from .linalg.matrix import atomic_write_text
    atomic_write_text(path, report.dumps())


# -- dimension table -----------------------------------------------------------------------------

def dims_row(p: LatticeParams, cache_dir=None, exact_col_cap: int = EXACT_COL_CAP) -> dict:
    """One row of exact dimensions; cells beyond budget hold a skipped-budget marker."""
    cache = open_cache(cache_dir)
    cfg = SuiteConfig(p.g, p.L, mode="exact", exact_col_cap=exact_col_cap)
    objects = dict(_cached_objects(p, cfg))
    row: dict[str, object] = {"g": p.g, "L": p.L, "tau": tau(p.L), "dim_b1": dim_b1(p.g, p.L)}

    def cell(keys, fn):
        try:
            vals = fn()
        except BudgetExceeded:
            vals = (SKIP,) * len(keys)
        row.update(zip(keys, vals))

    def cover():
        closed, bounded = h1_dims(build_cover_complex(p, True)), h1_dims(build_cover_complex(p, False))
        i_dim = rank(cache.get(p, "relator_translates", objects["relator_translates"])).rank
        return closed.h1, closed.c_dim, bounded.h1, bounded.c_dim, i_dim

    def rank_psi_v1():
        m = cache.get(p, "psi_v1", objects["psi_v1"])
        return (rank(m).rank if m.cols else 0,)

    def quotient_v():
        ws = Workspace(p, "exact", 0, exact_col_cap)
        q, _ = ws.quotient_dim(["V1", "V2", "V3"])
        return (q,)

    cell(("h1_closed", "c_closed", "h1_bounded", "c_bounded", "i_dim"), cover)
    cell(("orbits",), lambda: (sp_orbit_count_bfs(p),))
    cell(("rank_psi_v1",), rank_psi_v1)
    cell(("quotient_dim_v",), quotient_v)
    return {k: row[k] for k in DIMS_HEADER}


def dims_table(g_range, L_range, output_path=None, cache_dir=None, exact_col_cap: int = EXACT_COL_CAP) -> str:
    """CSV of exact dimensions over the cross product of the ranges."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=DIMS_HEADER, lineterminator="\n")
    w.writeheader()
    for g in g_range:
        for L in L_range:
            w.writerow(dims_row(LatticeParams(g, L), cache_dir, exact_col_cap))
    text = buf.getvalue()
    if output_path:
        from .linalg.matrix import atomic_write_text
        atomic_write_text(output_path, text)
    return text


__all__ = ["DIMS_HEADER", "SUITES", "SuiteConfig", "dims_row", "dims_table", "run_many", "run_suite",
           "write_report"]
