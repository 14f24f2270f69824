import pytest

from graphbank import errors
from graphbank.automation import (
    REQUIRED_FIELDS,
    AutomationLevel,
    EditProposal,
    KernelConfig,
    KernelSpan,
    kernel_chunk,
    suggest,
)
from graphbank.graph import group, new_sentence
from graphbank.samples import sample_tagsets
from graphbank.synthetic import generate_corpus
from graphbank.tagger import extract_instances, train


@pytest.fixture(scope="module")
def model():
    return train(extract_instances(generate_corpus(200, seed=13)))


def sentence(tagsets, pairs):
    return new_sentence("s", pairs, tagsets)


# --- kernel chunking ------------------------------------------------------

def test_kernel_examples():
    assert kernel_chunk(["ART", "ADJA", "NN"]) == [KernelSpan(1, 3)]
    assert kernel_chunk(["ART", "NN", "ART", "NN"]) == [
        KernelSpan(1, 2),
        KernelSpan(3, 4),
    ]
    assert kernel_chunk(["VVFIN"]) == []
    assert kernel_chunk([]) == []


def test_kernel_pattern_edges():
    # bare noun, noun pile-up, adjectives without article
    assert kernel_chunk(["NN"]) == [KernelSpan(1, 1)]
    assert kernel_chunk(["NN", "NE", "NN"]) == [KernelSpan(1, 3)]
    assert kernel_chunk(["ADJA", "ADJA", "NN"]) == [KernelSpan(1, 3)]
    # article or adjectives without a noun do not match
    assert kernel_chunk(["ART", "ADJA", "VVFIN"]) == []
    # greedy restart after a non-member
    assert kernel_chunk(["VVFIN", "ART", "NN", "KON", "NE"]) == [
        KernelSpan(2, 3),
        KernelSpan(5, 5),
    ]


def test_kernel_custom_config():
    config = KernelConfig(
        determiner_tags=frozenset({"D"}),
        adjective_tags=frozenset({"A"}),
        noun_tags=frozenset({"N"}),
        category="XP",
    )
    assert kernel_chunk(["D", "A", "A", "N", "N"], config) == [KernelSpan(1, 5, "XP")]


def test_kernel_span_validates():
    with pytest.raises(ValueError):
        KernelSpan(3, 2)
    with pytest.raises(ValueError):
        KernelSpan(0, 1)


# --- the ladder -----------------------------------------------------------

def test_required_fields_shrink_strictly():
    order = sorted(REQUIRED_FIELDS)
    assert order == [
        AutomationLevel.MANUAL,
        AutomationLevel.FUNCTIONS,
        AutomationLevel.CATEGORY,
        AutomationLevel.KERNELS,
    ]
    for lower, higher in zip(order, order[1:]):
        assert REQUIRED_FIELDS[higher] < REQUIRED_FIELDS[lower]
    assert REQUIRED_FIELDS[AutomationLevel.KERNELS] == frozenset()


def test_level0_proposes_nothing(tagsets, model):
    g = sentence(tagsets, [("die", "ART"), ("Stadt", "NN")])
    assert suggest(g, model, 0) == []
    assert suggest(g, None, 0) == []  # no model needed at level 0


def test_levels_need_model(tagsets):
    g = sentence(tagsets, [("die", "ART"), ("Stadt", "NN")])
    for level in (1, 2, 3):
        with pytest.raises(errors.NoModel):
            suggest(g, None, level)


def test_level1_labels_given_selection(tagsets, model):
    g = sentence(tagsets, [("die", "ART"), ("Stadt", "NN")])
    proposals = suggest(g, model, 1, selection=([1, 2], "NP"))
    assert len(proposals) == 1
    p = proposals[0]
    assert p.children == (1, 2)
    assert p.category == "NP"
    assert p.functions == ("NK", "NK")
    assert p.level is AutomationLevel.FUNCTIONS
    assert len(p.suggestions) == 2


def test_level2_chooses_category(tagsets, model):
    g = sentence(tagsets, [("die", "ART"), ("Stadt", "NN")])
    proposals = suggest(g, model, 2, selection=[1, 2])
    assert proposals[0].category == "NP"
    assert proposals[0].functions == ("NK", "NK")
    assert proposals[0].level is AutomationLevel.CATEGORY


def test_level2_sees_phrase_children(tagsets, model):
    g = sentence(tagsets, [("die", "ART"), ("Stadt", "NN"), ("wächst", "VVFIN")])
    np_node = group(g, [1, 2], "NP", tagsets)
    proposals = suggest(g, model, 2, selection=[np_node, 3])
    assert proposals[0].category == "S"
    assert proposals[0].functions[1] == "HD"


def test_level3_chunks_unattached(tagsets, model):
    g = sentence(
        tagsets,
        [("die", "ART"), ("Stadt", "NN"), ("wächst", "VVFIN"), ("Anna", "NE")],
    )
    proposals = suggest(g, model, 3)
    assert [p.children for p in proposals] == [(1, 2), (4,)]
    assert all(p.category == "NP" for p in proposals)
    assert all(p.level is AutomationLevel.KERNELS for p in proposals)


def test_level3_skips_attached_spans(tagsets, model):
    g = sentence(
        tagsets,
        [("die", "ART"), ("Stadt", "NN"), ("wächst", "VVFIN"), ("Anna", "NE")],
    )
    group(g, [1, 2], "NP", tagsets)
    proposals = suggest(g, model, 3)
    assert [p.children for p in proposals] == [(4,)]


def test_suggest_never_mutates(tagsets, model):
    g = sentence(tagsets, [("die", "ART"), ("Stadt", "NN"), ("Anna", "NE")])
    before = g.copy()
    suggest(g, model, 1, selection=([1, 2], "NP"))
    suggest(g, model, 2, selection=[3])
    suggest(g, model, 3)
    assert g == before


def test_selection_validation(tagsets, model):
    g = sentence(tagsets, [("die", "ART"), ("Stadt", "NN")])
    with pytest.raises(ValueError, match=r"\(children, category\)"):
        suggest(g, model, 1, selection=[1, 2])
    with pytest.raises(ValueError, match="list of child ids"):
        suggest(g, model, 2, selection=7)
    with pytest.raises(ValueError, match="no children"):
        suggest(g, model, 2, selection=[])
    with pytest.raises(ValueError, match="duplicate"):
        suggest(g, model, 2, selection=[1, 1])
    with pytest.raises(errors.UnknownNode):
        suggest(g, model, 2, selection=[1, 99])
    with pytest.raises(ValueError):
        suggest(g, model, 9)


def test_proposals_are_plain_data(tagsets, model):
    g = sentence(tagsets, [("die", "ART"), ("Stadt", "NN")])
    p = suggest(g, model, 1, selection=([1, 2], "NP"))[0]
    assert isinstance(p, EditProposal)
    assert hash(p) is not None  # frozen, usable as a set member
    assert p.functions == tuple(s.best[0] for s in p.suggestions)
