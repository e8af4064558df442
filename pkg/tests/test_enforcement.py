import pytest
from hypothesis import given, strategies as st

from helpers import EXAMPLE, EXAMPLE_PARTITION, TRAFFIC, TRAFFIC_PARTITION
from ltlenforce.encoding import Top, initial_tcl, reduce, update_tcl
from ltlenforce.enforcement import (
    Delivery, Enforcer, FinalBroadcast, FalseNextFormulaError, NextFormula,
    Observation, ProtocolError, RejectedSpecificationError, TclEntry,
    TclTransfer, UnreachableAlphabetError, _check_next, global_decision,
    init_state, local_decision, parse_message, route_next, serialize_message,
)
from ltlenforce.ltl import FALSE, TRUE, AlphabetPartition, event, event_key, parse_formula as P, simplify


def T(p, f):
    return Top(simplify(P(p)), simplify(P(f)))


def example_after_m1():
    return reduce(update_tcl(initial_tcl(EXAMPLE), event("a"), {"a"}))


def test_init_state():
    assert init_state(EXAMPLE) == {event(): ((T("!a & !b", "G !b"), T("!b", "F !a & G !b")), 0)}
    assert init_state(TRAFFIC) == initial_tcl(TRAFFIC)
    for bad in ("false", "a & !a", "G a & F !a"):
        with pytest.raises(RejectedSpecificationError):
            init_state(P(bad))


def test_route_next():
    assert route_next(example_after_m1(), 1, EXAMPLE_PARTITION) == 2
    tcl = {event("g1"): ((Top(P("g3 & !g4"), TRAFFIC),), 1)}
    assert route_next(tcl, 2, TRAFFIC_PARTITION) == 3
    assert route_next({event(): ((Top(TRUE, TRUE),), 0)}, 1, EXAMPLE_PARTITION) is None
    with pytest.raises(UnreachableAlphabetError):
        route_next({event(): ((Top(P("z"), TRUE),), 0)}, 1, EXAMPLE_PARTITION)


def test_global_decision_example():
    tcl = reduce(update_tcl(example_after_m1(), event(), {"b"}))
    assert global_decision(tcl) == (event("a"), P("F !a & G !b"))


def test_global_decision_traffic():
    tcl = {
        event("g1", "g3"): ((Top(TRUE, TRAFFIC),), 1),
        event("g2", "g4"): ((Top(TRUE, TRAFFIC),), 3),
    }
    assert global_decision(tcl) == (event("g1", "g3"), TRAFFIC)


def test_global_decision_prefers_finished_obligations():
    tcl = {
        event("a"): ((Top(TRUE, P("G b")),), 1),
        event("b"): ((Top(TRUE, TRUE),), 1),
        event(): ((Top(TRUE, P("F a")),), 2),
    }
    assert global_decision(tcl) == (event("b"), TRUE)
    assert global_decision({event("c"): ((Top(TRUE, P("a")),), 4)}) == (event("c"), P("a"))


def test_global_decision_rejects_open_tcl():
    with pytest.raises(ProtocolError):
        global_decision(example_after_m1())


def test_local_decision():
    tcl = {
        event(): ((Top(P("!g3 & g2 & g4"), TRAFFIC),), 1),
        event("g1"): ((Top(P("g3 & !g2 & !g4"), TRAFFIC),), 0),
    }
    assert local_decision(tcl, True) == event("g1")
    assert local_decision({event("g1", "g3"): ((Top(P("!g4"), TRAFFIC),), 1)}, True) == event("g1", "g3")
    two = {
        event("a"): ((Top(P("c"), P("d")),), 1),
        event("b"): ((Top(P("c"), P("d")), Top(P("!c"), P("e"))), 1),
    }
    assert local_decision(two, True) == event("b")
    # when deciding finally, finished obligations win over model count
    fin = {
        event("a"): ((Top(TRUE, P("d")), Top(TRUE, P("e"))), 1),
        event("b"): ((Top(TRUE, TRUE),), 1),
    }
    assert local_decision(fin, False) == event("b")


tcl_entries = st.dictionaries(
    st.frozensets(st.sampled_from("abc")),
    st.tuples(st.integers(1, 3), st.integers(0, 3)),
    min_size=1,
)


@given(tcl_entries)
def test_local_forward_rule_matches_brute_force(spec):
    futures = [P("a"), P("b"), P("c")]
    tcl = {ev: (tuple(Top(P("d"), f) for f in futures[:k]), n) for ev, (k, n) in spec.items()}
    best = min(tcl, key=lambda ev: (tcl[ev][1], -len(tcl[ev][0]), event_key(ev)))
    assert local_decision(tcl, True) == best


def test_false_next_formula_guard():
    with pytest.raises(FalseNextFormulaError):
        _check_next(FALSE)
    assert _check_next(P("a")) == P("a")


@pytest.mark.parametrize("msg, text", [
    (TclTransfer({event("a"): ((T("!b", "F !a & G !b"),), 0)}), "TCL\n{a} -> dist=0 ; (!b | F !a & G !b)"),
    (FinalBroadcast({event(): ((Top(TRUE, TRUE),), 2)}), "FINAL\n{} -> dist=2 ; (true | true)"),
    (TclEntry(event("g1"), (Top(P("g3 & !g4"), P("G a")),), 1), "ENTRY\n{g1} -> dist=1 ; (g3 & !g4 | G a)"),
    (NextFormula(P("F !a & G !b")), "NEXT\nF !a & G !b"),
])
def test_message_wire_format(msg, text):
    assert serialize_message(msg) == text
    assert parse_message(text) == msg


def test_message_parse_rejects_unknown_kind():
    with pytest.raises(ValueError):
        parse_message("HELLO\n")


def test_global_enforcer_flow():
    m1 = Enforcer(1, EXAMPLE_PARTITION, EXAMPLE)
    m2 = Enforcer(2, EXAMPLE_PARTITION, EXAMPLE)
    assert m2.step(Observation(event())) == []
    [(dest, msg)] = m1.step(Observation(event("a")))
    assert dest == 2 and isinstance(msg, TclTransfer)
    assert msg.tcl == example_after_m1()
    [(back, final)] = m2.step(Delivery(1, msg))
    assert back == 1 and isinstance(final, FinalBroadcast)
    assert m1.step(Delivery(2, final)) == []
    for m in (m1, m2):
        assert m.done and m.next == P("F !a & G !b")
    assert m1.local_output == event("a") and m2.local_output == event()


def test_local_enforcer_forwards_one_entry():
    m1 = Enforcer(1, TRAFFIC_PARTITION, TRAFFIC, "local")
    m2 = Enforcer(2, TRAFFIC_PARTITION, TRAFFIC, "local")
    m2.step(Observation(event("g2")))
    [(dest, entry)] = m1.step(Observation(event("g1")))
    assert dest == 2
    assert entry == TclEntry(event("g1"), (Top(P("g3 & !g2 & !g4"), TRAFFIC),), 0)
    [(dest, entry)] = m2.step(Delivery(1, entry))
    assert dest == 3
    assert entry == TclEntry(event("g1"), (Top(P("g3 & !g4"), TRAFFIC),), 1)
    assert m2.local_output == event()


def test_transfer_without_open_atoms_is_final():
    m2 = Enforcer(2, EXAMPLE_PARTITION, EXAMPLE)
    m2.step(Observation(event()))
    tcl = {event("a", "b"): ((Top(TRUE, P("G a")),), 1)}
    assert m2.step(Delivery(1, TclTransfer(tcl))) == []
    assert m2.done and m2.next == P("G a")


def test_protocol_violations():
    g = Enforcer(2, EXAMPLE_PARTITION, EXAMPLE)
    g.step(Observation(event()))
    with pytest.raises(ProtocolError):
        g.step(Observation(event()))
    with pytest.raises(ProtocolError):
        g.step(Delivery(1, NextFormula(TRUE)))
    loc = Enforcer(2, EXAMPLE_PARTITION, EXAMPLE, "local")
    loc.step(Observation(event()))
    with pytest.raises(ProtocolError):
        loc.step(Delivery(1, TclTransfer(example_after_m1())))
    with pytest.raises(ProtocolError):
        Enforcer(1, EXAMPLE_PARTITION, EXAMPLE).end_round()
    with pytest.raises(ValueError):
        Enforcer(1, EXAMPLE_PARTITION, EXAMPLE).step(Observation(event("b")))
    with pytest.raises(ValueError):
        Enforcer(1, EXAMPLE_PARTITION, EXAMPLE, "central")


def test_local_is_not_optimal_on_a_small_case():
    phi = P("a & b & c | !a")
    part = AlphabetPartition(({"a"}, {"b", "c"}))
    m1, m2 = (Enforcer(i, part, phi, "local") for i in (1, 2))
    m2.step(Observation(event()))
    [(_, entry)] = m1.step(Observation(event("a")))
    m2.step(Delivery(1, entry))
    assert m1.local_output | m2.local_output == event("a", "b", "c")
    g1, g2 = (Enforcer(i, part, phi) for i in (1, 2))
    g2.step(Observation(event()))
    [(_, msg)] = g1.step(Observation(event("a")))
    [(_, final)] = g2.step(Delivery(1, msg))
    g1.step(Delivery(2, final))
    assert g1.local_output | g2.local_output == event()


def test_dead_initial_pairs_are_dropped_without_local_atoms():
    # nobody evaluates an atom in round 1, yet the (false, true) pair must not leak
    from ltlenforce.netsim import Network

    net = Network(P("false | !(X (F d))"), AlphabetPartition(({"a"}, {"d"})))
    out = net.run_round(event("d"))
    assert out.chosen_event == event("d")
    assert out.next_formula == P("G !d")
    assert net.run_round(event("a", "d")).chosen_event == event("a")
