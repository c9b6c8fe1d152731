"""One test per acceptance criterion; each records a PASS/FAIL line shown in the terminal summary."""

import io
import json
import math
import random
import time


from conftest import CORPUS, CORPUS_FILES, CORPUS_PROFILE, CRITERIA
from hcdfg_metrics.analysis import analyze_paths
from hcdfg_metrics.cli import main
from hcdfg_metrics.graph.model import DFG
from hcdfg_metrics.guidance import HW, SW, Thresholds, classify, rank
from hcdfg_metrics.metrics import (
    CostTable,
    MetricRecord,
    OpCounts,
    Profile,
    characterize,
    combine_if,
    combine_par,
    combine_seq,
    max_unroll_factor,
)
from hcdfg_metrics.projection import flatten_for_scheduling, tradeoff_curve
from programs import (
    build_all,
    flatten_all_to_all,
    oracle_unroll,
    profile_for,
    random_hierarchy,
    random_loop,
    random_program,
    weighted_longest_path,
)


def record(n: int, ok: bool, detail: str) -> None:
    CRITERIA[n] = (bool(ok), detail)
    assert ok, detail


def analyze_file(name: str, profile=None):
    start = time.perf_counter()
    analyses, failures = analyze_paths([str(CORPUS / name)], profile=profile)
    assert not failures, failures
    return {a.name: a for a in analyses}, time.perf_counter() - start


def rec(nop, cp):
    return MetricRecord.of(OpCounts(nop, 0, 0), cp)


def test_criterion_01_five_parallel_blocks():
    res, elapsed = analyze_file("five_blocks.c")
    tree = res["five_blocks"].tree
    blocks = [r for _, g, r in tree.rows() if g.level == DFG]
    ok = (
        len(blocks) == 5
        and all(abs(r.gamma - 1.0) <= 1e-9 for r in blocks)
        and abs(tree.root.gamma - 5.0) <= 1e-9
        and elapsed < 1.0
    )
    record(1, ok, f"block gammas {[round(r.gamma, 9) for r in blocks]}, root {tree.root.gamma:.9f}, {elapsed:.3f}s")


def test_criterion_02_dct_invariants():
    res, elapsed = analyze_file("dct.c")
    rows, cols, full = (res[n].tree.root for n in ("dct_rows", "dct_cols", "dct2d"))
    unrolls = [
        max_unroll_factor(g, res[n].hcdfg)
        for n in ("dct_rows", "dct_cols")
        for g in res[n].hcdfg.graphs()
        if g.is_loop
    ]
    ok = (
        all(r.com == 0 for r in (rows, cols, full))
        and unrolls and all(u == 8 for u in unrolls)
        and abs(rows.gamma - cols.gamma) <= 1e-9
        and abs(rows.gamma - full.gamma) <= 1e-9
        and all(abs(r.mom - 0.58) <= 0.10 for r in (rows, cols, full))
        and elapsed < 1.0
    )
    record(2, ok, f"COM {rows.com}/{cols.com}/{full.com}, unroll {sorted(set(unrolls))}, "
                  f"gamma {rows.gamma:.9f}/{cols.gamma:.9f}/{full.gamma:.9f}, MOM {full.mom:.3f}, {elapsed:.3f}s")


def test_criterion_03_dwt_hierarchy():
    res, elapsed = analyze_file("dwt.c")
    g = {n: a.tree.root.gamma for n, a in res.items()}
    subs_h = [g["dwt_predict_h"], g["dwt_update_h"]]
    subs_v = [g["dwt_predict_v"], g["dwt_update_v"]]
    ok = (
        all(g["dwt1d_h"] > s for s in subs_h)
        and all(g["dwt1d_v"] > s for s in subs_v)
        and abs(g["dwt2d"] - g["dwt1d_h"]) <= 1e-9
        and abs(g["dwt2d"] - g["dwt1d_v"]) <= 1e-9
        and elapsed < 1.0
    )
    record(3, ok, f"sub {max(subs_h + subs_v):.4f} < 1D {g['dwt1d_h']:.6f}, 2D {g['dwt2d']:.6f}, {elapsed:.3f}s")


def test_criterion_04_flattening_oracle():
    costs = CostTable()
    start = time.perf_counter()
    mismatches = []
    for seed in range(250):
        h = random_hierarchy(random.Random(seed), max_nodes=50)
        root = characterize(h, costs).root
        dag = flatten_all_to_all(h)
        assert dag.number_of_nodes() <= 50
        cp = weighted_longest_path(dag, lambda n: costs.cost(dag.nodes[n]["node"]))
        nop = sum(1 for n in dag.nodes
                  if dag.nodes[n]["node"].kind == "processing" or dag.nodes[n]["node"].is_global_access)
        if root.cp != cp or root.nop != nop:
            mismatches.append((seed, root.nop, nop, root.cp, cp))
    elapsed = time.perf_counter() - start
    record(4, not mismatches and elapsed < 10, f"250 hierarchies, {len(mismatches)} mismatches, {elapsed:.2f}s")


def test_criterion_05_formula_units():
    branch = combine_if(rec(1, 1), rec(4, 2), rec(2, 2), 0.5)
    seq = combine_seq([rec(6, 3), rec(4, 4)])
    par = combine_par([rec(3, 3), rec(6, 6)])
    ok = (
        abs(branch.gamma - 2.5) <= 1e-12
        and abs(seq.gamma - 10 / 7) <= 1e-12
        and abs(par.gamma - 1.5) <= 1e-12
    )
    record(5, ok, f"branch {branch.gamma!r}, sequence {seq.gamma!r}, parallel {par.gamma!r}")


def _range_violations(hs, profile, scale):
    bad = []
    unit = CostTable()
    scaled = unit.scaled(scale)
    for h in hs:
        base = characterize(h, unit, profile)
        other = characterize(h, scaled, profile)
        for path, g, r in base.rows():
            if not 0.0 <= r.mom <= 1.0:
                bad.append((h.function, path, "mom", r.mom))
            if g.level == DFG and r.nop >= 1 and r.gamma < 1.0:
                bad.append((h.function, path, "gamma", r.gamma))
            s = other.by_path(path)
            if not math.isclose(s.gamma, r.gamma / scale, rel_tol=1e-9, abs_tol=1e-12):
                bad.append((h.function, path, "scaled gamma", r.gamma, s.gamma))
            if not (math.isclose(s.mom, r.mom, rel_tol=1e-9, abs_tol=1e-12)
                    and math.isclose(s.com, r.com, rel_tol=1e-9, abs_tol=1e-12)):
                bad.append((h.function, path, "scaled ratios"))
    return bad


def test_criterion_06_metric_ranges(corpus_profile):
    bad = []
    n_functions = 0
    for path in CORPUS_FILES:
        with open(path, encoding="utf-8") as fh:
            hs = build_all(fh.read(), path)
        n_functions += len(hs)
        bad += _range_violations(hs, corpus_profile, 3.0)
    for seed in range(1000):
        hs = build_all(random_program(seed))
        scale = (0.5, 2.0, 3.0, 7.25)[seed % 4]
        bad += _range_violations(hs, profile_for(hs), scale)
    record(6, not bad, f"{n_functions} corpus functions + 1000 random programs, {len(bad)} violations {bad[:3]}")


def test_criterion_07_unroll_oracle():
    disagreements = []
    n = 150
    for seed in range(n):
        case = random_loop(random.Random(seed))
        h = build_all(case.source)[0]
        loop = next(g for g in h.graphs() if g.is_loop)
        got, want = max_unroll_factor(loop, h), oracle_unroll(case)
        if got != want:
            disagreements.append((seed, got, want))
    record(7, not disagreements, f"{n} random affine loops, {n - len(disagreements)}/{n} agree {disagreements[:3]}")


WIDE_SOURCE = "void wide(int x[32], int y[32], int o[32])\n{\n" + "".join(
    f"    o[{k}] = (x[{k}] + y[{k}]) * (x[{k}] - y[{k}]);\n" for k in range(16)
) + "}\n"


def test_criterion_08_projection(corpus_analyses, corpus_profile):
    costs = CostTable()
    problems = []
    for name, a in sorted(corpus_analyses.items()):
        curve = tradeoff_curve(a.hcdfg, costs=costs, profile=corpus_profile)
        again = tradeoff_curve(a.hcdfg, costs=costs, profile=corpus_profile)
        flat_cp = flatten_for_scheduling(a.hcdfg, corpus_profile, costs).critical_path(costs)
        tight = curve.tightest
        if tight is None or tight.budget != flat_cp:
            problems.append((name, "tightest", tight, flat_cp))
        end = json.loads(json.dumps(curve.to_dict()))["points"][-1]
        if any(end[k] > 1 for k in ("alu", "mul", "memport")):
            problems.append((name, "endpoint", end))
        pts = curve.points
        for p, q in zip(pts, pts[1:]):
            if p.budget >= q.budget or any(b > a_ for a_, b in zip(p.resources, q.resources)):
                problems.append((name, "monotone", p, q))
        if curve.to_csv() != again.to_csv() or curve.to_gnuplot() != again.to_gnuplot():
            problems.append((name, "determinism"))
    wide = build_all(WIDE_SOURCE)[0]
    gamma = characterize(wide, costs).root.gamma
    speedup = tradeoff_curve(wide, costs=costs).tightest.speedup
    ok = not problems and gamma >= 10 and speedup >= 8
    record(8, ok, f"{len(corpus_analyses)} corpus curves, {len(problems)} problems {problems[:2]}; "
                  f"synthetic gamma {gamma:.2f} speedup {speedup:.2f}")


CAMERA_ROWS = [
    ("TestGravity", 43.88, 0.78, 0.22),
    ("Label", 10.31, 0.74, 0.07),
    ("ChangeBackground", 5.62, 0.76, 0.03),
    ("RconstDilat", 4.75, 0.65, 0.32),
    ("DilatBin", 4.69, 0.70, 0.02),
    ("HistoThreshold", 4.00, 0.64, 0.29),
    ("Envelop", 3.91, 0.66, 0.13),
    ("Absolute", 2.60, 0.71, 0.08),
    ("ThresholdAdapt", 2.20, 0.75, 0.08),
    ("Convolve TabHisto", 1.27, 0.70, 0.03),
    ("Div", 1.25, 0.73, 0.00),
    ("GetHistogram", 1.22, 0.75, 0.00),
    ("SetValue", 1.14, 0.78, 0.00),
    ("Add", 1.11, 0.75, 0.00),
    ("Sub", 1.11, 0.75, 0.00),
    ("ErodBin", 1.10, 0.73, 0.01),
]


def test_criterion_09_classification():
    th = Thresholds()
    records = [(n, MetricRecord.from_ratios(g, m, c)) for n, g, m, c in CAMERA_ROWS]
    cls = {n: classify(r, th).value for n, r in records}
    shuffled = records[:]
    random.Random(5).shuffle(shuffled)
    order = rank(shuffled, th).names()
    expected = [n for n, *_ in CAMERA_ROWS]
    ok = (
        cls["TestGravity"] == HW and cls["Label"] == HW
        and all(cls[n] == SW for n in ("Add", "Sub", "Div", "ErodBin"))
        and order == expected
    )
    record(9, ok, f"TestGravity {cls['TestGravity']}, Label {cls['Label']}, "
                  f"Add/Sub/Div/ErodBin {sorted({cls[n] for n in ('Add', 'Sub', 'Div', 'ErodBin')})}, "
                  f"rank order {'matches' if order == expected else 'differs'}")


def _run(args):
    out, err = io.StringIO(), io.StringIO()
    code = main(args, stdout=out, stderr=err)
    return code, out.getvalue()


def test_criterion_10_end_to_end():
    base = CORPUS_FILES + ["--profile", str(CORPUS_PROFILE)]
    start = time.perf_counter()
    code, first = _run(base + ["--format", "json"])
    elapsed = time.perf_counter() - start
    n_functions = len(json.loads(first)["functions"])
    outputs = {first}
    for jobs in ("1", "2", "4", "8"):
        for fmt in ("json", "table", "csv"):
            c, text = _run(base + ["--format", fmt, "--jobs", jobs])
            if fmt == "json":
                outputs.add(text)
            else:
                c2, text2 = _run(base + ["--format", fmt, "--jobs", "1"])
                if text != text2:
                    outputs.add(f"{fmt} differs at jobs {jobs}")
            code = max(code, c)
    ok = code == 0 and n_functions >= 10 and elapsed < 10 and len(outputs) == 1
    record(10, ok, f"{n_functions} functions in {elapsed:.3f}s, {len(outputs)} distinct outputs across runs and jobs")
