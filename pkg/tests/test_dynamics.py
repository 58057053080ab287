"""Rule homeomorphisms, prefix groups, and the worked tower builders."""

import pytest

from bratteli import diagram as dg
from bratteli import dynamics as dyn
from bratteli import realize


# ------------------------------------------------------------ points, parsing

def test_parse_point_splits_head_and_tail():
    assert dyn.parse_point("1^inf") == ("", "1")
    assert dyn.parse_point("01^inf") == ("0", "1")
    assert dyn.parse_point("1100^inf") == ("110", "0")


def test_parse_point_rejects_garbage():
    for bad in ("0110", "1^in", "^inf", "21^inf", ""):
        with pytest.raises(ValueError):
            dyn.parse_point(bad)


def test_point_prefix_truncates_and_pads():
    assert dyn.point_prefix("1^inf", 4) == "1111"
    assert dyn.point_prefix("01^inf", 5) == "01111"
    assert dyn.point_prefix("1100^inf", 2) == "11"
    assert dyn.point_prefix("0^inf", 0) == ""


def test_parse_homeo_round_trip():
    for text in ("0<>1", "00<>01", "1*:00<>01", "001<>100,0001<>1100"):
        assert dyn.format_homeo(dyn.parse_homeo(text)) == text


def test_parse_homeo_accepts_whitespace():
    h = dyn.parse_homeo(" 010 <> 110 ")
    assert dyn.format_homeo(h) == "010<>110"


def test_parse_homeo_bad_words():
    with pytest.raises(ValueError) as e:
        dyn.parse_homeo("00<>0")
    assert "distinct equal-length words" in str(e.value)
    with pytest.raises(ValueError):
        dyn.parse_homeo("00<>00")
    with pytest.raises(ValueError) as e:
        dyn.parse_homeo("00<01")
    assert "wants the form u<>v" in str(e.value)
    with pytest.raises(ValueError):
        dyn.parse_homeo("0x<>10")


def test_parse_homeo_rejects_overlapping_rules():
    # 0 and 00 are nested cylinders, the two swaps collide.
    with pytest.raises(ValueError) as e:
        dyn.parse_homeo("0<>1, 00<>01")
    assert "rules overlap" in str(e.value)
    # starred families keep colliding after 1^m shifts: 1.00 lands in 10X
    with pytest.raises(ValueError):
        dyn.parse_homeo("1*:00<>10")


def test_parse_generators_split_on_semicolons():
    gens = dyn.parse_generators("0<>1; 1*:00<>01")
    assert [dyn.format_homeo(g) for g in gens] == ["0<>1", "1*:00<>01"]
    assert dyn.parse_generators(" ; ;") == []


# --------------------------------------------------------- tables, swap pairs

def test_swap_pairs_starred_family():
    g = dyn.rule_g_inf()
    assert g.swap_pairs(3) == ([("00", "01"), ("100", "101")], ["110", "111"])
    assert g.swap_pairs(4) == (
        [("00", "01"), ("100", "101"), ("1100", "1101")], ["1110", "1111"])
    # at depth 1 nothing is visible yet, both cylinders are residual
    assert g.swap_pairs(1) == ([], ["0", "1"])


def test_swap_pairs_finite_rule():
    pairs, residual = dyn.rule_g(0).swap_pairs(3)
    assert pairs == [("00", "01")] and residual == []


def test_swap_pairs_split_error():
    with pytest.raises(ValueError) as e:
        dyn.rule_h_prime(1).swap_pairs(2)
    assert "splits depth-2 cylinders" in str(e.value)
    with pytest.raises(ValueError):
        # the m=2 family member 11000<>11010 differs inside depth 4
        dyn.parse_homeo("1*:000<>010").table(4)


def test_table_fixes_residual_words():
    t, residual = dyn.rule_g_inf().table(3)
    moved = {w: v for w, v in t.items() if v != w}
    assert moved == {"000": "010", "001": "011", "010": "000",
                     "011": "001", "100": "101", "101": "100"}
    assert residual == ["110", "111"]
    assert all(t[w] == w for w in residual)


def reference_image(rules, w):
    """Apply swap rules to a word by direct prefix matching."""
    for kind, x, y in rules:
        shifts = [0]
        if kind == "starred":
            shifts = range(len(w))
        for m in shifts:
            a, b = "1" * m + x, "1" * m + y
            if len(a) > len(w):
                break
            if w.startswith(a):
                return b + w[len(a):]
            if w.startswith(b):
                return a + w[len(b):]
    return w


def test_table_matches_reference_applier():
    cases = [dyn.rule_sigma(), dyn.rule_g(0), dyn.rule_g(2),
             dyn.rule_g_inf(), dyn.rule_h_prime(1), dyn.ex44_gens(3)[2]]
    for h in cases:
        maxlen = max(len(x) for _, x, _ in h.rules)
        k = maxlen + (2 if h.starred() else 0)
        table, residual = h.table(k)
        for w in dyn.all_words(k):
            if w in residual:
                # residual cylinders are setwise invariant, the table
                # keeps them in place rather than guessing an image
                assert table[w] == w
            else:
                assert table[w] == reference_image(h.rules, w)


def test_normalize_table_copies():
    h = dyn.rule_sigma()
    t, res = dyn.normalize_table(h, 2)
    t["00"] = "00"
    assert h.table(2)[0]["00"] == "10"
    assert res == []


def test_apply_word_uses_the_table():
    g = dyn.rule_g_inf()
    assert g.apply_word("100") == "101"
    assert g.apply_word("111") == "111"


# ------------------------------------------------------------------ fixed set

def test_fixed_set_starred_is_single_point():
    assert dyn.fixed_set(dyn.rule_g_inf()) == {
        "clopen": False,
        "depth": 3,
        "fixed_cylinders": [],
        "moved_cylinders": ["000", "001", "010", "011", "100", "101"],
        "residual": ["110", "111"],
        "isolated_point": "1^inf",
        "is_singleton": True,
    }


def test_fixed_set_finite_is_clopen():
    out = dyn.fixed_set(dyn.rule_g(2))
    assert out["clopen"] is True
    assert out["depth"] == 4
    assert out["moved_cylinders"] == ["1100", "1101"]
    assert out["residual"] == []
    assert out["isolated_point"] is None
    assert out["is_singleton"] is False
    assert len(out["fixed_cylinders"]) == 14


def test_fixed_set_sigma_moves_everything():
    out = dyn.fixed_set(dyn.rule_sigma())
    assert out == {"clopen": True, "depth": 1, "fixed_cylinders": [],
                   "moved_cylinders": ["0", "1"], "residual": [],
                   "isolated_point": None, "is_singleton": False}


def test_fixed_set_wide_starred_family_is_inconclusive():
    # longer starred words keep fixed cylinders around 1^inf, so the
    # singleton question is left open
    out = dyn.fixed_set(dyn.parse_homeo("1*:000<>001"))
    assert out["clopen"] is False
    assert out["is_singleton"] is None
    assert "0100" in out["fixed_cylinders"]
    assert out["residual"] == ["1100", "1110", "1111"]


def test_fixed_set_clopen_iff_no_starred_rule():
    for n in range(6):
        assert dyn.fixed_set(dyn.rule_g(n))["clopen"] is True
    assert dyn.fixed_set(dyn.rule_g_inf())["clopen"] is False


# -------------------------------------------------------------- prefix groups

def test_prefix_group_closure_of_sigma():
    table, _ = dyn.rule_sigma().table(2)
    G = dyn.PrefixGroup(2, [table])
    assert G.order() == 2
    assert G.is_trivial() is False
    assert G.orbits() == [("00", "10"), ("01", "11")]
    assert G.census() == {2: 2}
    assert len(G.element_tables()) == 2


def test_trivial_group():
    t = dyn.trivial_group()
    assert t.depth == 0 and t.is_trivial() and t.order() == 1
    assert dyn.trivial_group(2).census() == {1: 4}


def test_prefix_group_rejects_non_permutation():
    broken = {w: "00" for w in dyn.all_words(2)}
    with pytest.raises(ValueError) as e:
        dyn.PrefixGroup(2, [broken])
    assert "not a permutation" in str(e.value)


def test_closure_guard():
    table, _ = dyn.rule_sigma().table(2)
    G = dyn.PrefixGroup(2, [table])
    with pytest.raises(ValueError) as e:
        G.closure(guard=1)
    assert "group too large" in str(e.value)


def test_pw_full_closure_blocks_and_order():
    F = dyn.pw_full_closure([dyn.rule_sigma()], 2)
    assert F.full_blocks == [("00", "10"), ("01", "11")]
    assert F.order() == 4
    assert F.census() == {2: 2}


def test_pw_full_closure_matches_generated_closure():
    # the full group on the orbit blocks equals the group generated by
    # its spanning transpositions
    F = dyn.pw_full_closure([dyn.rule_sigma()], 2)
    G = dyn.PrefixGroup(2, F.element_tables())
    assert G.order() == F.order()
    assert G.orbits() == F.orbits()


def test_pw_full_closure_tower_orders():
    # stage n acts on depth n+1 words with 2^n - 1 doubleton blocks
    for n in (1, 2, 3):
        F = dyn.pw_full_closure(dyn.sec5_G_stage(n), n + 1)
        assert F.order() == 2 ** (2 ** n - 1)
        assert F.census() == {2: 2 ** n - 1, 1: 2}


def test_contains_full_flavor():
    F = dyn.pw_full_closure([dyn.rule_sigma()], 2)
    assert F.contains(dyn.rule_sigma().table(2)[0]) is True
    crossing = {w: w for w in dyn.all_words(2)}
    crossing["00"], crossing["01"] = "01", "00"
    assert F.contains(crossing) is False


def test_contains_generated_flavor():
    table, _ = dyn.rule_sigma().table(2)
    G = dyn.PrefixGroup(2, [table])
    assert G.contains(table) is True
    assert G.contains({w: w for w in dyn.all_words(2)}) is True
    other = dyn.rule_g(0).table(2)[0]
    assert G.contains(other) is False


def test_to_depth_lifts_by_suffix():
    table, _ = dyn.rule_sigma().table(1)
    lifted = dyn.PrefixGroup(1, [table]).to_depth(3)
    assert lifted.depth == 3
    assert lifted.order() == 2
    assert lifted.census() == {2: 4}
    t = lifted.gens[0]
    words = lifted.words
    assert words[t[words.index("010")]] == "110"


# -------------------------------------------- stabilizer, invariant partition

def test_stabilizer_subgroup_frozen():
    st = dyn.stabilizer_subgroup([dyn.rule_sigma()], 2, "1^inf")
    assert st.full_blocks == [("00", "10")]
    assert st.order() == 2


def test_stabilizer_fixes_the_point_prefix():
    st = dyn.stabilizer_subgroup([dyn.rule_sigma()], 2, "1^inf")
    prefix = dyn.point_prefix("1^inf", 2)
    for t in st.element_tables():
        assert t[prefix] == prefix


def test_invariant_partition_generated():
    table, _ = dyn.rule_sigma().table(2)
    G = dyn.PrefixGroup(2, [table])
    assert dyn.invariant_partition(G) == [("00", "01"), ("10", "11")]


def test_invariant_partition_full():
    F = dyn.pw_full_closure([dyn.rule_sigma()], 2)
    assert dyn.invariant_partition(F) == [("00",), ("01",), ("10",), ("11",)]


def test_invariant_partition_setwise_is_pointwise():
    # whenever an element maps a part onto itself it must fix the part
    # word by word
    table, _ = dyn.rule_sigma().table(3)
    G = dyn.PrefixGroup(3, [table, dyn.rule_g(0).table(3)[0]])
    parts = dyn.invariant_partition(G)
    assert sorted(w for p in parts for w in p) == dyn.all_words(3)
    for t in G.element_tables():
        for p in parts:
            if set(t[w] for w in p) == set(p):
                assert all(t[w] == w for w in p)


# ------------------------------------------------------------------ ud checks

def test_ud_check_finite_single_finite_rule():
    assert dyn.ud_check_finite([dyn.rule_g(0)]) == {
        "verdict": True, "depth": 4, "order": 2,
        "witness_partition": [
            ["0000", "0001", "0010", "0011"],
            ["0100", "0101", "0110", "0111"],
            ["1000", "1001", "1010", "1011",
             "1100", "1101", "1110", "1111"]]}


def test_ud_check_finite_sigma():
    out = dyn.ud_check_finite([dyn.rule_sigma()])
    assert out["verdict"] is True and out["depth"] == 3
    assert out["witness_partition"] == [
        ["000", "001", "010", "011"], ["100", "101", "110", "111"]]


def test_ud_witness_partition_separates_orbits():
    # accepted partition: no group orbit meets a part twice
    for gens in ([dyn.rule_g(0)], [dyn.rule_sigma()],
                 [dyn.rule_g(0), dyn.rule_g(1)]):
        out = dyn.ud_check_finite(gens)
        assert out["verdict"] is True
        k = out["depth"]
        G = dyn.PrefixGroup(k, [g.table(k)[0] for g in gens])
        assert G.order() == out["order"]
        for t in G.element_tables():
            ident = all(t[w] == w for w in G.words)
            for part in out["witness_partition"]:
                inside = set(part)
                hits = sum(1 for w in part if t[w] != w and t[w] in inside)
                if not ident:
                    assert hits == 0


def test_ud_check_finite_starred_violator():
    out = dyn.ud_check_finite([dyn.rule_g_inf()])
    assert out == {"verdict": False, "depth": 4, "order": 2,
                   "witness_element": {"parities": [1],
                                       "families": ["1*:00<>01"],
                                       "moved_words": 14}}


def test_ud_check_finite_mixed_generators_still_fail():
    out = dyn.ud_check_finite([dyn.rule_g(0), dyn.rule_g_inf()])
    assert out["verdict"] is False and out["order"] == 4
    assert out["witness_element"]["families"] == ["1*:00<>01"]


def test_ud_check_finite_rejects_residue_movers():
    with pytest.raises(ValueError) as e:
        dyn.ud_check_finite([dyn.parse_homeo("1*:00<>01"),
                             dyn.parse_homeo("1111<>0000")])
    assert "moves the residue cylinder" in str(e.value)


def test_ud_check_finite_needs_generators():
    with pytest.raises(ValueError):
        dyn.ud_check_finite([])


def test_ud_check_finite_guard():
    with pytest.raises(ValueError):
        dyn.ud_check_finite([dyn.rule_g(0)], guard=1)


def test_ud_partition_search_accepts_sigma():
    out = dyn.ud_partition_search([dyn.rule_sigma()], 1, 2)
    assert out == {"accepted": [["0"], ["1"]], "checked": 2}


def test_ud_partition_search_rejects_starred():
    assert dyn.ud_partition_search([dyn.rule_g_inf()], 1, 3) == {
        "accepted": None, "checked": 2}


# ---------------------------------------------------------------------- theta

def test_theta_word_frozen():
    assert dyn.theta_word("100") == "010"
    assert dyn.theta_word("0110") == "1010"
    assert dyn.theta_word("1100110") == "0110110"


def test_theta_word_residual():
    for w in ("111", "110", "10", "0"):
        with pytest.raises(ValueError) as e:
            dyn.theta_word(w)
        assert "residual word" in str(e.value)


def test_theta_word_is_injective():
    k = 5
    excluded = {"1" * k, "1" * (k - 1) + "0"}
    domain = [w for w in dyn.all_words(k) if w not in excluded]
    images = [dyn.theta_word(w) for w in domain]
    assert len(set(images)) == len(domain)
    # not a self-map of the domain: 11110 is hit while 01111 is not
    assert "11110" in images and "01111" not in images


def test_theta_check_frozen():
    assert dyn.theta_check(5) == {
        "ok": True, "depth": 5, "m_checked": [0, 1, 2],
        "words_checked": 30, "excluded": ["11110", "11111"],
        "mismatches": []}
    with pytest.raises(ValueError):
        dyn.theta_check(2)


# ----------------------------------------------------------- named rule stock

def test_named_rules_format():
    assert dyn.format_homeo(dyn.rule_sigma()) == "0<>1"
    assert dyn.format_homeo(dyn.rule_g(0)) == "00<>01"
    assert dyn.format_homeo(dyn.rule_g(2)) == "1100<>1101"
    assert dyn.format_homeo(dyn.rule_g_inf()) == "1*:00<>01"
    assert dyn.format_homeo(dyn.rule_h_prime(1)) == "010<>110"
    assert dyn.format_homeo(dyn.rule_alpha("0")) == "00<>10"
    assert dyn.format_homeo(dyn.rule_beta("0")) == "00<>01"
    # beta keeps the leading 1-run, drops the pivot zero, keeps the tail
    assert dyn.format_homeo(dyn.rule_beta("101")) == "1001<>1011"


def test_index_words():
    assert dyn.index_words(2) == ["00", "01", "10"]
    assert len(dyn.index_words(4)) == 15


def test_stage_generators():
    assert [dyn.format_homeo(r) for r in dyn.sec5_G_stage(2)] == [
        "000<>100", "001<>101", "010<>110"]
    assert [dyn.format_homeo(r) for r in dyn.sec5_H_stage(1)] == [
        "00<>01"]
    assert [dyn.format_homeo(r) for r in dyn.sec5_H_stage(2)] == [
        "000<>010", "001<>011", "100<>101"]


# --------------------------------------------------------- chains to diagrams

def test_chain_orders_and_censuses():
    ch = dyn.sec5_G_chain(3)
    assert [(g.depth, g.order()) for g in ch] == [
        (0, 1), (2, 2), (3, 8), (4, 128)]
    assert [g.census() for g in ch[1:]] == [
        {2: 1, 1: 2}, {2: 3, 1: 2}, {2: 7, 1: 2}]
    # H runs through isomorphic stages
    assert [(g.depth, g.order()) for g in dyn.sec5_H_chain(3)] == [
        (0, 1), (2, 2), (3, 8), (4, 128)]
    fc = dyn.fc2_chain(3)
    assert [(g.depth, g.order()) for g in fc] == [
        (0, 1), (1, 2), (2, 2), (3, 2)]
    assert fc[-1].census() == {2: 4}


def test_chain_to_diagram_dyadic_reproduces_builders():
    for chain, builder in ((dyn.sec5_G_chain(3), dyn.sec5_G_diagram),
                           (dyn.sec5_H_chain(3), dyn.sec5_H_diagram),
                           (dyn.fc2_chain(3), dyn.fc2_diagram)):
        stages, dia = dyn.chain_to_diagram(chain, "dyadic")
        want = builder(3)
        assert dia.levels == want.levels
        assert dia.matrices == want.matrices


def test_chain_to_diagram_stage_records():
    stages, _ = dyn.chain_to_diagram(dyn.fc2_chain(2), "dyadic")
    assert stages[0] == {"depth": 1, "atoms": 2, "census": {2: 1},
                         "order": 2, "blocks": [["0", "1"]]}


def test_chain_to_diagram_minimal_fc2_is_stationary():
    stages, dia = dyn.chain_to_diagram(dyn.fc2_chain(3), "minimal")
    assert dia.levels == [[("r", 1)], [("0", 2)], [("00", 2)], [("000", 2)]]
    assert dia.matrices == [[[2]], [[1]], [[1]]]


def test_chain_to_diagram_minimal_g_merges_cylinders():
    stages, dia = dyn.chain_to_diagram(dyn.sec5_G_chain(2), "minimal")
    assert dia.levels[1] == [("00", 2), ("01", 1)]
    assert dia.levels[2] == [("000", 2), ("001", 2), ("010", 2), ("011", 1)]


def test_chain_to_diagram_errors():
    table, _ = dyn.rule_sigma().table(1)
    sig = dyn.PrefixGroup(1, [table])
    with pytest.raises(ValueError) as e:
        dyn.chain_to_diagram([sig])
    assert "must start at the trivial group" in str(e.value)
    with pytest.raises(ValueError):
        dyn.chain_to_diagram(dyn.fc2_chain(2), "fancy")
    bad = [dyn.trivial_group(), sig,
           dyn.PrefixGroup(2, [dyn.rule_g(0).table(2)[0]])]
    with pytest.raises(ValueError) as e:
        dyn.chain_to_diagram(bad, "dyadic")
    assert "chain is not increasing" in str(e.value)
    shrinking = [dyn.trivial_group(2), dyn.trivial_group(1)]
    with pytest.raises(ValueError) as e:
        dyn.chain_to_diagram(shrinking, "dyadic")
    assert "nondecreasing" in str(e.value)


def test_chain_census_matches_realized_groups():
    chain = dyn.sec5_G_chain(3)
    ext = dg.extend(dyn.sec5_G_diagram(3))
    for n in (1, 2, 3):
        assert realize.level_group(ext, n).census() == chain[n].census()


# ---------------------------------------------------------- diagram builders

def test_raw_tower_levels_frozen():
    raw = dyn.sec5_G_raw_diagram(3)
    assert raw.levels == [
        [("r", 1)],
        [("0", 1), ("1", 1)],
        [("00", 2), ("01", 1), ("11", 1)],
        [("000", 2), ("001", 2), ("010", 2), ("011", 1), ("111", 1)]]
    assert raw.matrices == [
        [[1, 1]],
        [[1, 1, 0], [1, 0, 1]],
        [[1, 1, 0, 0, 0], [0, 0, 1, 1, 0], [0, 0, 1, 0, 1]]]


def test_raw_tower_telescopes_to_the_main_tower():
    # dropping the depth-1 level recovers the two-step builders
    for d in (2, 3, 4):
        chosen = [0] + list(range(2, d + 2))
        g = dg.telescope(dyn.sec5_G_raw_diagram(d + 1), chosen)
        want = dyn.sec5_G_diagram(d)
        assert g.levels == want.levels and g.matrices == want.matrices
        h = dg.telescope(dyn.sec5_H_raw_diagram(d + 1), chosen)
        want = dyn.sec5_H_diagram(d)
        assert h.levels == want.levels and h.matrices == want.matrices


def test_builders_validate():
    for build in (dyn.sec5_G_diagram, dyn.sec5_H_diagram, dyn.fc2_diagram,
                  dyn.sec5_G_raw_diagram, dyn.sec5_H_raw_diagram):
        assert dg.validate(build(4)) == []


# ------------------------------------------------------------------ example 4

def test_ex44_words_frozen():
    assert dyn.ex44_words(10) == [
        "001", "0001", "0101", "00001", "01001",
        "01101", "000001", "010001", "011001", "011101"]


def test_ex44_gens_frozen():
    assert [dyn.format_homeo(g) for g in dyn.ex44_gens(3)] == [
        "001<>100", "0001<>1100", "0101<>1110"]


def test_ex44_cylinders_pairwise_disjoint():
    cyls = []
    for g in dyn.ex44_gens(10):
        for _, x, y in g.rules:
            cyls.extend([x, y])
    for i in range(len(cyls)):
        for j in range(i + 1, len(cyls)):
            a, b = cyls[i], cyls[j]
            assert not a.startswith(b) and not b.startswith(a)


# -------------------------------------------------------------------- catalog

def test_example_names():
    assert dyn.example_names() == [
        "ex2.7-G1", "ex2.7-G2", "ex4.4-gens(N)", "sec5-FC2",
        "sec5-G", "sec5-G-raw", "sec5-H", "sec5-H-raw"]


def test_example_catalog_entries():
    g = dyn.example_catalog("sec5-G")
    assert g["kind"] == "tower"
    assert g["diagram"](2).levels == dyn.sec5_G_diagram(2).levels
    fc = dyn.example_catalog("sec5-FC2")
    assert [dyn.format_homeo(r) for r in fc["rules"]] == ["0<>1"]
    r1 = dyn.example_catalog("ex2.7-G1")
    assert r1["kind"] == "rules"
    assert [dyn.format_homeo(r) for r in r1["rules"]] == ["1*:00<>01"]
    raw = dyn.example_catalog("sec5-H-raw")
    assert raw["kind"] == "tower"


def test_example_catalog_unknown():
    with pytest.raises(ValueError) as e:
        dyn.example_catalog("nope")
    assert "unknown example" in str(e.value)
