import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from hcdfg_metrics.errors import GraphTooLargeError
from hcdfg_metrics.graph.model import PROCESSING
from hcdfg_metrics.metrics import CostTable
from hcdfg_metrics.projection import (
    KINDS,
    ResourceModel,
    TradeoffPoint,
    flatten_for_scheduling,
    monotone,
    sample_budgets,
    schedule,
    schedule_ops,
    tradeoff_curve,
)
from hcdfg_metrics.projection.curve import CSV_HEADER
from programs import build_all, profile_for, random_program

COSTS = CostTable()


def flat(src, **kw):
    h = build_all(src)[0]
    return h, flatten_for_scheduling(h, **kw)


def as_nx(dag):
    g = nx.DiGraph()
    g.add_nodes_from(range(len(dag)))
    g.add_edges_from((p, i) for i, ps in enumerate(dag.preds) for p in ps)
    return g


def ops(dag, op):
    return [i for i, n in enumerate(dag.nodes) if n is not None and n.kind == PROCESSING and n.op == op]


def test_straight_line_dfg_flattens_to_itself():
    h, dag = flat("void f(int a, int b, int y){ y = (a + b) * 2; }")
    original = list(h.root.elementary())
    assert sorted(n.id for n in dag.nodes) == sorted(n.id for n in original)
    index = {n.id: i for i, n in enumerate(dag.nodes)}
    edges = {(index[e.src], index[e.dst]) for g in h.graphs() for e in g.edges}
    assert {(p, i) for i, ps in enumerate(dag.preds) for p in ps} == edges


def test_unrollable_loop_gives_independent_copies():
    _, dag = flat("void f(int a[4], int b[4]){ int i; for (i = 0; i < 4; i++) { b[i] = a[i] * 2; } }")
    muls = ops(dag, "*")
    assert len(muls) == 4
    g = as_nx(dag)
    assert not any(nx.has_path(g, x, y) for x in muls for y in muls if x != y)


def test_carried_loop_chains_its_copies():
    _, dag = flat("void f(int a[8]){ int i; for (i = 1; i < 5; i++) { a[i] = a[i - 1] * 3; } }")
    muls = ops(dag, "*")
    assert len(muls) == 4
    g = as_nx(dag)
    assert all(nx.has_path(g, x, y) for x, y in zip(muls, muls[1:]))


def test_reduction_copies_only_chain_the_accumulator():
    _, dag = flat("int f(int a[4]){ int i; int s; s = 0; for (i = 0; i < 4; i++) { s = s + a[i] * 2; } return s; }")
    g = as_nx(dag)
    muls, adds = ops(dag, "*"), ops(dag, "+")
    assert len(muls) == 4
    assert not any(nx.has_path(g, x, y) for x in muls for y in muls if x != y)
    chained = [a for a in adds if any(nx.has_path(g, m, a) for m in muls)]
    assert len(chained) == 4
    assert all(nx.has_path(g, x, y) for x, y in zip(chained, chained[1:]))


def test_node_cap():
    h = build_all("void f(int a[64], int b[64]){ int i; for (i = 0; i < 64; i++) { b[i] = a[i] + 1; } }")[0]
    with pytest.raises(GraphTooLargeError):
        flatten_for_scheduling(h, node_cap=50)


def test_heavier_branch_is_kept_and_flagged():
    src = "void f(int x, int a[4], int y){ if (x > 0) { y = a[0] * a[1] + a[2] * a[3]; } else { y = 1; } }"
    h, dag = flat(src)
    assert len(ops(dag, "*")) == 2
    assert dag.dropped_branches == 1
    curve = tradeoff_curve(h)
    assert curve.dropped_branches == 1
    assert "dropped" in curve.to_gnuplot()


WIDE = "void f(int x[8], int y[8], int o[8]){" + "".join(
    f" o[{k}] = (x[{k}] + y[{k}]) * (x[{k}] - y[{k}]);" for k in range(8)) + " }"


def test_schedule_endpoints():
    h, dag = flat(WIDE)
    cp, seq = dag.critical_path(COSTS), dag.sequential_cost(COSTS)
    assert not schedule(dag, cp - 1).feasible
    tight = schedule(dag, cp)
    assert tight.feasible and tight.speedup == seq / cp
    loose = schedule(dag, seq)
    assert loose.feasible and loose.resources == (1, 1, 1)
    assert all(a >= b for a, b in zip(tight.resources, loose.resources))


def test_two_point_curve_is_the_trivial_endpoints():
    h, dag = flat(WIDE)
    curve = tradeoff_curve(h, n_points=2)
    assert [p.budget for p in curve.points] == [dag.critical_path(COSTS), dag.sequential_cost(COSTS)]
    assert curve.tightest.speedup == pytest.approx(curve.sequential / curve.critical_path)


def test_curve_outputs():
    h = build_all(WIDE)[0]
    curve = tradeoff_curve(h, n_points=5)
    lines = curve.to_csv().splitlines()
    assert lines[0] == CSV_HEADER == "budget,alu,mul,memport,speedup,feasible"
    assert len(lines) == 6
    assert "$curve << EOD" in curve.to_gnuplot()
    assert curve.to_dict()["points"][0]["budget"] == curve.critical_path


def test_resource_model_kinds():
    h, dag = flat("void f(int a, int b, int y){ int t; t = a / b; y = t < 3; }")
    m = ResourceModel()
    kinds = {n.op or n.name: m.kind(n) for n in dag.nodes if n is not None}
    assert kinds["/"] == "mul" and kinds["<"] == "alu" and kinds["a"] == "memport" and kinds["t"] is None
    assert ResourceModel({"/": "alu"}).kind(next(n for n in dag.nodes if n is not None and n.op == "/")) == "alu"


def test_sample_budgets():
    assert sample_budgets(10, 10, 4) == [10]
    assert sample_budgets(4, 6, 10) == [4, 5, 6]
    b = sample_budgets(3, 500, 8)
    assert len(b) == 8 and b[0] == 3 and b[-1] == 500 and b == sorted(set(b))
    with pytest.raises(ValueError):
        sample_budgets(1, 5, 1)


def test_monotone_cleanup_keeps_budget_order():
    pts = [TradeoffPoint(1, (0, 0, 0), False), TradeoffPoint(2, (3, 1, 2), True), TradeoffPoint(4, (4, 1, 1), True)]
    out = monotone(pts)
    assert out[0] == pts[0]
    assert out[2].resources == (3, 1, 1)


def _random_dags(seed):
    hs = build_all(random_program(seed))
    prof = profile_for(hs, trips=2)
    return [flatten_for_scheduling(h, prof) for h in hs]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.floats(0, 1))
def test_schedules_are_valid(seed, frac):
    model = ResourceModel()
    for dag in _random_dags(seed):
        cp, seq = dag.critical_path(COSTS), dag.sequential_cost(COSTS)
        budget = cp + round(frac * (seq - cp))
        point, start = schedule_ops(dag, budget, model, COSTS)
        assert point.feasible
        d = dag.durations(COSTS)
        for i, ps in enumerate(dag.preds):
            assert all(start[p] + d[p] <= start[i] for p in ps)
            assert start[i] + d[i] <= budget
        for k, limit in zip(KINDS, point.resources):
            busy = {}
            for i, n in enumerate(dag.nodes):
                if d[i] and model.kind(n) == k:
                    for c in range(start[i], start[i] + d[i]):
                        busy[c] = busy.get(c, 0) + 1
            assert max(busy.values(), default=0) <= limit


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_feasibility_boundary_and_monotone_curves(seed):
    hs = build_all(random_program(seed))
    prof = profile_for(hs, trips=2)
    for h in hs:
        dag = flatten_for_scheduling(h, prof)
        cp = dag.critical_path(COSTS)
        if cp > 0:
            assert not schedule(dag, cp - 1).feasible
        assert schedule(dag, max(cp, 1)).feasible
        curve = tradeoff_curve(h, profile=prof, n_points=6)
        assert curve.tightest.budget == cp
        for p, q in zip(curve.points, curve.points[1:]):
            assert p.budget < q.budget
            assert all(b <= a for a, b in zip(p.resources, q.resources))
        assert all(r <= 1 for r in curve.points[-1].resources)
        assert tradeoff_curve(h, profile=prof, n_points=6).to_csv() == curve.to_csv()
