import csv
import io

import pytest

from pickroute import VerticalConfig as V, generate_transition_table, required_vertical
from pickroute.configs import SINGLE_HORIZONTAL, TWO_HORIZONTAL, is_closing
from pickroute.states import (VARIANTS, add_degree, all_states, apply_horizontal, apply_vertical,
                              initial_state, parse_state, regular_states, terminal_state)

# Single-block combined transitions: state -> {horizontal: (next state, annotation)}.
# Missing cells are invalid or dominated.
SINGLE_COMBINED_TABLE = {
    "(U,U,1C)": {"11": ("(U,U,1C)", "iv"), "20": ("(E,0,1C)", "i"), "02": ("(0,E,1C)", "i"),
                 "22": ("(E,E,1C)", "i"), "00": ("(0,0,1C)", "i")},
    "(E,0,1C)": {"11": ("(U,U,1C)", "i"), "20": ("(E,0,1C)", "ii"), "22": ("(E,E,2C)", "iv"),
                 "00": ("(0,0,1C)", "ii")},
    "(0,E,1C)": {"11": ("(U,U,1C)", "i"), "02": ("(0,E,1C)", "iii"), "22": ("(E,E,2C)", "iv"),
                 "00": ("(0,0,1C)", "iii")},
    "(E,E,1C)": {"11": ("(U,U,1C)", "i"), "20": ("(E,0,1C)", "iv"), "02": ("(0,E,1C)", "iv"),
                 "22": ("(E,E,1C)", "iv"), "00": ("(0,0,1C)", "iv")},
    "(E,E,2C)": {"11": ("(U,U,1C)", "i"), "22": ("(E,E,2C)", "iv")},
    "(0,0,0C)": {"11": ("(U,U,1C)", "i"), "20": ("(E,0,1C)", "ii"), "02": ("(0,E,1C)", "iii"),
                 "22": ("(E,E,2C)", "iv"), "00": ("(0,0,1C)", "iii")},
    "(0,0,1C)": {"00": ("(0,0,1C)", "vi")},
}

COUNTS = {
    "single-original-vertical": 20, "single-original-horizontal": 9, "single-combined": 16,
    "two-original-lower": 130, "two-original-upper": 130, "two-original-horizontal": 44,
    "two-mod1-lower": 107, "two-mod1-upper": 107, "two-combined": 231,
}


def table_cells(*tables):
    cells = {}
    for t in tables:
        for row in csv.DictReader(io.StringIO(t.to_csv())):
            cells.setdefault(row["state"], {})[row["horizontal"]] = (row["next_state"],
                                                                      row["annotation"])
    return cells


def test_state_spaces():
    assert [s.label() for s in regular_states(1)] == [
        "(U,U,1C)", "(E,0,1C)", "(0,E,1C)", "(E,E,1C)", "(E,E,2C)"]
    assert len(regular_states(2)) == 23
    assert len(all_states(2)) == 25
    for blocks in (1, 2):
        for s in all_states(blocks):
            assert parse_state(s.label(), blocks) == s


def test_two_block_split_labels_are_distinct():
    labels = [s.label() for s in regular_states(2)]
    assert len(set(labels)) == len(labels)
    assert "(E,E,E,2C,a-bc)" in labels


def test_single_combined_matches_expected_table():
    ours = table_cells(generate_transition_table("single-combined"),
                       generate_transition_table("single-combined", final=True))
    assert ours == SINGLE_COMBINED_TABLE


@pytest.mark.parametrize("variant", VARIANTS)
def test_intermediate_counts(variant):
    assert generate_transition_table(variant).evaluation_count == COUNTS[variant]


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("final", [False, True])
def test_tables_close_over_state_space(variant, final):
    table = generate_transition_table(variant, final)
    blocks = table.blocks
    states = set(all_states(blocks))
    for t in table.entries:
        assert t.from_state in states and t.to_state in states
        if t.horizontal is not None and table.kind != "vertical":
            assert is_closing(t.horizontal) == final or t.from_state.initial
            assert t.to_state.terminal == final


def test_mod1_drops_two_pass():
    for side in ("lower", "upper"):
        orig = generate_transition_table(f"two-original-{side}")
        mod1 = generate_transition_table(f"two-mod1-{side}")
        assert all(t.vertical_lower != V.TWO_PASS and t.vertical_upper != V.TWO_PASS
                   for t in mod1.entries)
        assert orig.evaluation_count - mod1.evaluation_count == 23


def test_single_combined_is_vertical_then_horizontal():
    for t in generate_transition_table("single-combined").entries:
        if not t.from_state.regular:
            continue
        mid = apply_vertical(t.from_state, t.vertical_lower, 0, 1)
        assert apply_horizontal(mid, t.horizontal) == t.to_state


def test_two_combined_is_composition_of_original_steps():
    for t in generate_transition_table("two-combined").entries:
        if not t.from_state.regular:
            continue
        s = t.from_state
        if t.vertical_lower != V.NONE:
            s = apply_vertical(s, t.vertical_lower, 1, 2)
        if t.vertical_upper != V.NONE:
            s = apply_vertical(s, t.vertical_upper, 0, 1)
        assert s is not None
        assert apply_horizontal(s, t.horizontal, allow_new=False) == t.to_state


def test_single_combined_verticals_follow_degree_rule():
    # the vertical of every regular cell is the one forced by the horizontal degrees
    for t in generate_transition_table("single-combined").entries:
        s = t.from_state
        if not s.regular and not (s.initial and not is_closing(t.horizontal)):
            continue
        back, front = (add_degree(p, k) for p, k in zip(s.parities, t.horizontal))
        cfg = required_vertical(back, front, back > 0, front > 0, empty=False)
        assert cfg == t.vertical_lower, t


def test_required_vertical_cases():
    assert required_vertical(1, 1, True, True, False) is V.ONE_PASS
    assert required_vertical(0, 0, False, False, True) is V.NONE
    assert required_vertical(2, 0, True, False, False) is V.TOP
    assert required_vertical(0, 2, False, True, False) is V.BOTTOM
    with pytest.raises(ValueError):
        required_vertical(1, 0, True, False, False)


def test_horizontal_rejects_dangling_odd_vertex():
    assert apply_horizontal(parse_state("(U,U,1C)", 1), (1, 0)) is None
    assert terminal_state(1).terminal and not initial_state(1).terminal


def test_skip_entry_for_uncompressed_single_block():
    plain = generate_transition_table("single-original-horizontal")
    skipping = generate_transition_table("single-original-horizontal", skip=True)
    extra = [t for t in skipping.entries if t not in plain.entries]
    assert len(extra) == 1
    assert extra[0].from_state.initial and extra[0].to_state.initial
    # skip entries start from the initial state and so do not count
    assert skipping.evaluation_count == plain.evaluation_count


def test_horizontal_catalogue_use():
    single = generate_transition_table("single-original-horizontal")
    assert {t.horizontal for t in single.entries} <= set(SINGLE_HORIZONTAL)
    two = generate_transition_table("two-original-horizontal")
    assert {t.horizontal for t in two.entries} <= set(TWO_HORIZONTAL)
