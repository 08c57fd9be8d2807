import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubofp import Graph, IlpInstance, KnapsackInstance, QuboInstance, RationalQubo, SolveReport
from qubofp.io_formats import (
    ParseError,
    parse_assignment,
    parse_graph,
    parse_ilp,
    parse_knapsack,
    parse_qubo,
    parse_report,
    parse_rqubo,
    write_graph,
    write_ilp,
    write_knapsack,
    write_qubo,
    write_report,
    write_rqubo,
)
from qubofp.reductions import reduce_clique_to_squbo

BIG = st.integers(-(2**200), 2**200)


def test_parse_qubo_examples():
    inst = parse_qubo("qubo 1 1\n1 1 -1\n")
    assert inst == QuboInstance(1, {(1, 1): -1})
    path = parse_qubo("qubo 3 4\n1 1 -1\n2 2 -1\n3 3 -1\n1 3 1\n")
    assert path == reduce_clique_to_squbo(Graph(3, frozenset({(1, 2), (2, 3)})))


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("qubo 2 1\n2 1 5\n", 2, 1),  # lower triangle
        ("qubo 2 2\n1 1 5\n1 1 6\n", 3, 1),  # duplicate
        ("qubo 2 1\n1 3 5\n", 2, 3),  # out of range
        ("qubo 2 2\n1 1 5\n", 2, 1),  # missing line
        ("qubo 2 1\n1 1 x\n", 2, 5),  # bad integer
        ("qubo 2 1\n1 1 1_0\n", 2, 5),
        ("qubo 0 0\n", 1, 6),
        ("qubit 1 0\n", 1, 1),
        ("qubo 1 1\n1 1 1\n1 1 1\n", 3, 1),  # trailing content
        ("qubo 1 1\n1  1\n", 2, 4),
    ],
)
def test_parse_qubo_rejections(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_qubo(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_comments_crlf_and_tabs():
    inst = parse_qubo("# header next\r\nqubo\t2 2\r\n# entry\r\n1 2   -7\r\n2\t2 3\r\n")
    assert inst.entries == {(1, 2): -7, (2, 2): 3}


def test_parse_graph_examples():
    assert parse_graph("p edge 3 2\ne 1 2\ne 2 3\n") == Graph(3, frozenset({(1, 2), (2, 3)}))
    assert parse_graph("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n") == Graph(
        3, frozenset({(1, 2), (2, 3), (1, 3)})
    )
    with pytest.raises(ParseError, match="self-loop"):
        parse_graph("e 1 1")
    with pytest.raises(ParseError, match="self-loop"):
        parse_graph("p edge 2 1\ne 2 2\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse_graph("p edge 2 2\ne 1 2\ne 2 1\n")


def test_parse_ilp_knapsack_rqubo_examples():
    ilp = parse_ilp("ilp 1 2\n1 1 1\n1 1\n")
    assert ilp == IlpInstance([[1, 1]], [1], [1, 1])
    assert parse_knapsack("knapsack 3 6\n2 3 4\n") == KnapsackInstance((2, 3, 4), 6)
    assert parse_rqubo("rqubo 1 1\n1 1 1 2\n").entries == {(1, 1): (1, 2)}


@pytest.mark.parametrize(
    "parser, text, line, column",
    [
        (parse_ilp, "ilp 1 2\n1 1 -1\n1 1\n", 2, 5),
        (parse_ilp, "ilp 1 2\n1 1\n1 1\n", 2, 3),
        (parse_rqubo, "rqubo 1 1\n1 1 1 0\n", 2, 7),
        (parse_rqubo, "rqubo 1 1\n1 1 1 -2\n", 2, 7),
        (parse_knapsack, "knapsack 2 5\n1 0\n", 2, 3),
        (parse_knapsack, "knapsack 2 5\n1 2 3\n", 2, 5),
        (parse_knapsack, "knapsack 2 0\n1 2\n", 1, 12),
    ],
)
def test_other_rejections(parser, text, line, column):
    with pytest.raises(ParseError) as err:
        parser(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_parse_assignment():
    assert parse_assignment("# x\n0 1\n1\n") == (0, 1, 1)
    with pytest.raises(ParseError):
        parse_assignment("0 2\n")


def test_write_report_examples():
    r = SolveReport(n=1, min_value=-1, queries=1, search_interval=(-1, 0))
    text = write_report(r)
    assert text == '{"n":1,"min_value":"-1","oracle_queries":1,"search_lo":"-1","offset_applied":"0"}\n'
    r2 = SolveReport(n=3, min_value=-2, queries=5, search_interval=(-3, 0), argmin=(0, 1, 1))
    assert '"argmin":[0,1,1]' in write_report(r2)
    assert parse_report(write_report(r2)) == r2


@st.composite
def qubos(draw):
    n = draw(st.integers(1, 8))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True))
    return QuboInstance(n, {p: draw(BIG) for p in chosen})


@st.composite
def reports(draw):
    n = draw(st.integers(1, 12))
    argmin = draw(st.none() | st.tuples(*[st.integers(0, 1)] * n))
    return SolveReport(
        n=n,
        min_value=draw(BIG),
        queries=draw(st.integers(0, 10**6)),
        search_interval=(draw(BIG), draw(st.just(0) | BIG)),
        argmin=argmin,
        offset_applied=draw(BIG),
    )


@settings(max_examples=150, deadline=None)
@given(qubos())
def test_qubo_roundtrip(inst):
    text = write_qubo(inst)
    assert parse_qubo(text) == inst
    assert write_qubo(parse_qubo(text)) == text


@settings(max_examples=100, deadline=None)
@given(reports())
def test_report_roundtrip(r):
    assert parse_report(write_report(r)) == r


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.data())
def test_graph_roundtrip(n, data):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    edges = data.draw(st.frozensets(st.sampled_from(pairs)) if pairs else st.just(frozenset()))
    g = Graph(n, edges)
    assert parse_graph(write_graph(g)) == g


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_ilp_roundtrip(m, n, data):
    a = data.draw(st.lists(st.lists(BIG, min_size=n, max_size=n), min_size=m, max_size=m))
    b = data.draw(st.lists(st.integers(0, 2**200), min_size=m, max_size=m))
    c = data.draw(st.lists(BIG, min_size=n, max_size=n))
    ilp = IlpInstance(a, b, c)
    assert parse_ilp(write_ilp(ilp)) == ilp


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 2**200), min_size=1, max_size=6), st.integers(1, 2**200))
def test_knapsack_roundtrip(items, cap):
    kp = KnapsackInstance(tuple(items), cap)
    assert parse_knapsack(write_knapsack(kp)) == kp


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.data())
def test_rqubo_roundtrip(n, data):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    rq = RationalQubo(n, {p: (data.draw(BIG), data.draw(st.integers(1, 2**200))) for p in chosen})
    assert parse_rqubo(write_rqubo(rq)) == rq
