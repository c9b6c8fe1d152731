import math

import pytest
from hypothesis import given, settings, strategies as st

from hcdfg_metrics.errors import ConfigError, GraphCycleError, MissingTripCountError, ProbabilityError
from hcdfg_metrics.graph.model import DFG
from hcdfg_metrics.metrics import (
    CostTable,
    MetricRecord,
    OpCounts,
    Profile,
    characterize,
    combine_dag,
    combine_for,
    combine_if,
    combine_par,
    combine_seq,
    combine_switch,
    combine_while,
    count_ops,
    critical_path,
    gamma_dfg,
    longest_path,
)
from hcdfg_metrics.metrics.combine import ZERO
from programs import build_all


def rec(nop, cp, n_gmem=0, n_test=0):
    return MetricRecord.of(OpCounts(nop - n_gmem, n_gmem, n_test), cp)


def only_dfg(src, costs=None):
    h = build_all(src)[0]
    (g,) = [g for g in h.graphs() if g.level == DFG]
    return g


# -- critical path and counting ------------------------------------------------------


def test_diamond_longest_path():
    assert longest_path([1, 1, 1, 1], [(0, 1), (0, 2), (1, 3), (2, 3)]) == 3


def test_longest_path_rejects_cycles():
    with pytest.raises(GraphCycleError):
        longest_path([1, 1], [(0, 1), (1, 0)])


def test_chain_with_two_cycle_multiplier():
    g = only_dfg("void f(int a, int y){ y = a * 3; }")
    assert critical_path(g, CostTable.from_mapping({"*": 2})) == 4


def test_counts_of_global_sum():
    g = only_dfg("void f(int a, int b, int y){ y = a + b; }")
    assert count_ops(g) == OpCounts(1, 3, 0)


def test_accumulator_body_counts_only_the_array_read():
    h = build_all("int f(int a[8]){ int i; int s; s = 0; for (i = 0; i < 8; i++) { s = s + a[i]; } return s; }")[0]
    loop = next(g for g in h.graphs() if g.is_loop)
    counts = count_ops(loop.role("body"))
    assert counts.n_gmem == 1
    assert counts.n_proc == 1


def test_fully_sequential_dfg_has_unit_gamma():
    g = only_dfg("void f(int a, int y){ y = (((a + 1) * 2) - 3) ^ 5; }")
    costs = CostTable()
    assert gamma_dfg(count_ops(g), critical_path(g, costs)) == 1.0


def test_empty_graph_metrics_are_zero():
    r = MetricRecord.of(OpCounts(0, 0, 0), 0)
    assert (r.gamma, r.mom, r.com, r.nop) == (0, 0, 0, 0)


def test_ratio_definitions():
    r = MetricRecord.of(OpCounts(6, 2, 1), 4)
    assert r.nop == 8
    assert r.gamma == 2
    assert r.mom == 0.25
    assert r.com == 0.125


# -- combination rules ------------------------------------------------------------------


def test_sequence_rule():
    assert combine_seq([rec(6, 3), rec(4, 4)]).gamma == pytest.approx(10 / 7, abs=1e-12)


def test_parallel_rule():
    assert combine_par([rec(3, 3), rec(6, 6)]).gamma == pytest.approx(1.5, abs=1e-12)


def test_five_parallel_unit_blocks():
    assert combine_par([rec(4, 4)] * 5).gamma == 5


def test_branch_rule():
    r = combine_if(rec(1, 1), rec(4, 2), rec(2, 2), 0.5)
    assert r.gamma == pytest.approx(2.5, abs=1e-12)
    assert r.cp == 1 + 0.5 * 2 + 0.5 * 2
    assert r.nop == 1 + 0.5 * 4 + 0.5 * 2


def test_branch_with_empty_arm_contributes_zero():
    r = combine_if(rec(1, 1), rec(4, 2), ZERO, 0.3)
    assert r.gamma == pytest.approx(1 + 0.3 * 2)


def test_branch_probabilities_must_be_valid():
    with pytest.raises(ProbabilityError):
        combine_if(rec(1, 1), rec(1, 1), rec(1, 1), 0.7, 0.7)
    with pytest.raises(ProbabilityError):
        combine_if(rec(1, 1), rec(1, 1), rec(1, 1), 1.5)


def test_switch_rule():
    r = combine_switch(rec(1, 1), [(0.25, rec(4, 2))] * 4)
    assert r.gamma == pytest.approx(3.0, abs=1e-12)
    with pytest.raises(ProbabilityError):
        combine_switch(rec(1, 1), [(0.5, rec(1, 1)), (0.6, rec(1, 1))])


def test_for_rule():
    cond = rec(2, 1, n_test=1)
    body = rec(8, 4)
    r = combine_for(cond, body, ZERO, ZERO, 8)
    assert r.nop == 80 + 2
    assert r.cp == 40 + 1
    assert r.n_test == 9


def test_while_equals_for_without_init_and_step():
    cond, body = rec(2, 1, n_test=1), rec(5, 3, n_gmem=2)
    assert combine_while(cond, body, 3) == combine_for(cond, body, ZERO, ZERO, 3)


def test_do_while_runs_body_then_condition():
    cond, body = rec(2, 1, n_test=1), rec(5, 3)
    r = combine_while(cond, body, 3, do=True)
    assert (r.nop, r.cp) == (21, 12)
    with pytest.raises(ValueError):
        combine_while(cond, body, 0, do=True)


def test_dag_rule_mixes_sequence_and_parallel():
    a, b, c = rec(2, 2), rec(3, 3), rec(4, 1)
    r = combine_dag([a, b, c], [(0, 1)])
    assert r.cp == 5 and r.nop == 9


def test_single_record_passes_through():
    r = rec(7, 3, n_gmem=2)
    assert combine_seq([r]) is r and combine_par([r]) is r


counts = st.tuples(st.integers(0, 50), st.integers(0, 50), st.integers(0, 20), st.integers(1, 60))


def _recs(draw_list):
    return [MetricRecord.of(OpCounts(p, g, t), cp) for p, g, t, cp in draw_list]


@settings(max_examples=200, deadline=None)
@given(st.lists(counts, min_size=1, max_size=6))
def test_parallel_gamma_bounds_sequence_gamma(items):
    rs = _recs(items)
    seq, par = combine_seq(rs), combine_par(rs)
    assert par.nop == seq.nop
    assert par.cp <= seq.cp
    assert par.gamma >= seq.gamma - 1e-12


@settings(max_examples=200, deadline=None)
@given(st.lists(counts, min_size=1, max_size=6))
def test_mom_stays_in_unit_interval_under_combination(items):
    rs = _recs(items)
    for r in (combine_seq(rs), combine_par(rs), combine_if(rs[0], rs[-1], rs[len(rs) // 2], 0.3),
              combine_for(rs[0], rs[-1], ZERO, ZERO, 5)):
        assert 0 <= r.mom <= 1


# -- configuration ------------------------------------------------------------------------


def test_default_cost_table():
    from hcdfg_metrics.graph.model import ElementaryNode, MemoryClass

    t = CostTable()
    assert t.cost(ElementaryNode("x", "processing", op="*")) == 1
    assert t.cost(ElementaryNode("x", "conditional", op="<")) == 0
    assert t.cost(ElementaryNode("x", "memory", mode="read", mem_class=MemoryClass.N1)) == 1
    assert t.cost(ElementaryNode("x", "memory", mode="read", mem_class=MemoryClass.N2)) == 0
    assert CostTable.unit().cost(ElementaryNode("x", "conditional", op="<")) == 1
    assert t.scaled(3).cost(ElementaryNode("x", "processing", op="+")) == 3


def test_cost_table_from_toml(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text('"*" = 4\ntest = 1\n')
    t = CostTable.load(p)
    assert t.entries["*"] == 4 and t.entries["test"] == 1 and t.entries["read"] == 1


@pytest.mark.parametrize("text", ['"*" = -1\n', '"*" = "x"\n', "not toml ==\n"])
def test_bad_cost_tables(tmp_path, text):
    p = tmp_path / "c.toml"
    p.write_text(text)
    with pytest.raises(ConfigError):
        CostTable.load(p)


def test_missing_config_file():
    with pytest.raises(ConfigError):
        CostTable.load("/nonexistent/costs.toml")


def test_profile_from_toml(tmp_path):
    p = tmp_path / "p.toml"
    p.write_text('[trip_counts]\n"f/loop@3" = 7\n[branch_probabilities]\n"f/if@5" = 0.2\n"f/switch@9" = [0.5, 0.5]\n')
    prof = Profile.load(p)
    assert prof.trips("f/loop@3") == 7
    assert prof.if_probs("f/if@5") == pytest.approx((0.2, 0.8))
    assert prof.if_probs("f/if@99") == (0.5, 0.5)
    assert prof.switch_probs("f/switch@9", 2) == (0.5, 0.5)
    assert prof.switch_probs(None, 4) == (0.25,) * 4


@pytest.mark.parametrize("text", [
    '[trip_counts]\n"f/loop@3" = -2\n',
    '[branch_probabilities]\n"f/if@5" = 1.5\n',
    '[branch_probabilities]\n"f/switch@5" = [0.5, 0.6]\n',
    "[other]\nx = 1\n",
])
def test_bad_profiles(tmp_path, text):
    p = tmp_path / "p.toml"
    p.write_text(text)
    with pytest.raises(ConfigError):
        Profile.load(p)


# -- whole-function characterization ------------------------------------------------------


WHILE_SRC = "int f(int a[8]){ int i; i = 0; while (a[i] > 0) { i = i + 1; } return i; }"


def test_unknown_trip_count_is_reported():
    h = build_all(WHILE_SRC)[0]
    with pytest.raises(MissingTripCountError) as exc:
        characterize(h)
    assert "f/loop@1" in str(exc.value)


def test_profile_supplies_trip_count():
    h = build_all(WHILE_SRC)[0]
    few = characterize(h, profile=Profile({"f/loop@1": 2})).root
    many = characterize(h, profile=Profile({"f/loop@1": 20})).root
    assert many.nop > few.nop


def test_profile_overrides_static_bound():
    src = "int f(int a[8]){ int i; int s; s = 0; for (i = 0; i < 8; i++) { s = s + a[i]; } return s; }"
    h = build_all(src)[0]
    default = characterize(h).root
    override = characterize(h, profile=Profile({"f/loop@1": 16})).root
    assert override.n_gmem > default.n_gmem


NESTED_IF = """
int f(int dh, int tmp, int x)
{
    int r;
    if (dh == 0) {
        r = x;
    } else {
        if (tmp > 4) {
            r = x * 2;
        } else {
            r = x + 1;
        }
    }
    return r;
}
"""


def test_nested_branches_combine_inner_first():
    h = build_all(NESTED_IF)[0]
    tree = characterize(h)
    ifs = [g for g in h.graphs() if g.pattern == "if"]
    inner, outer = ifs  # post-order: the inner branch comes first
    r = {role: tree[outer.roles[role]] for role in outer.roles}
    want = combine_if(r["condition"], r["true-branch"], tree[inner.id] if outer.roles["false-branch"] == inner.id
                      else r["false-branch"], 0.5)
    assert tree[outer.id].gamma == pytest.approx(want.gamma)
    assert [g.id for g in h.graphs()].index(inner.id) < [g.id for g in h.graphs()].index(outer.id)


def test_branch_probabilities_come_from_profile():
    h = build_all(NESTED_IF)[0]
    outer = [g for g in h.graphs() if g.pattern == "if"][-1]
    a = characterize(h, profile=Profile({}, {outer.key: (0.9,)}))[outer.id]
    b = characterize(h, profile=Profile({}, {outer.key: (0.1,)}))[outer.id]
    assert not math.isclose(a.nop, b.nop) and not math.isclose(a.cp, b.cp)


def test_every_graph_gets_a_record():
    h = build_all(NESTED_IF)[0]
    tree = characterize(h)
    assert {g.id for _, g, _ in tree.rows()} == {g.id for g in h.graphs()}


def test_single_dfg_function_has_two_equal_records():
    h = build_all("void f(int a, int b, int y){ y = a + b; }")[0]
    rows = list(characterize(h).rows())
    assert len(rows) == 2
    (_, _, root), (_, _, leaf) = rows
    assert root.counts == leaf.counts and root.cp == leaf.cp and root.gamma == leaf.gamma


@settings(max_examples=200, deadline=None)
@given(st.lists(counts, min_size=3, max_size=6), st.integers(1, 4))
def test_sequence_rule_is_associative(items, cut):
    rs = _recs(items)
    cut = min(cut, len(rs) - 1)
    whole = combine_seq(rs)
    folded = combine_seq([combine_seq(rs[:cut]), combine_seq(rs[cut:])])
    assert folded.counts == whole.counts and folded.cp == whole.cp
    assert folded.gamma == pytest.approx(whole.gamma, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(counts, min_size=3, max_size=3), st.floats(0, 1), st.floats(0, 1))
def test_branch_gamma_is_affine_in_probability(items, p, q):
    c, t, f = _recs(items)
    g = lambda x: combine_if(c, t, f, x).gamma
    lam = 0.37
    assert g(lam * p + (1 - lam) * q) == pytest.approx(lam * g(p) + (1 - lam) * g(q), rel=1e-9, abs=1e-12)
    assert combine_if(c, t, f) == combine_if(c, t, f, 0.5, 0.5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0.25, 2.0, 5.0]))
def test_scaling_costs_keeps_counts_and_unroll(seed, c):
    from programs import profile_for, random_program

    hs = build_all(random_program(seed))
    prof = profile_for(hs)
    for h in hs:
        base, scaled = characterize(h, CostTable(), prof), characterize(h, CostTable().scaled(c), prof)
        for path, _, r in base.rows():
            s = scaled.by_path(path)
            assert s.counts == r.counts and s.max_unroll == r.max_unroll
            assert s.cp == pytest.approx(r.cp * c, rel=1e-9)
