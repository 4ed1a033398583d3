import pytest
from hypothesis import given, settings, strategies as st

from mcgkit.presentations import SurfaceParams, birman_hilden_2_0, g20_collapsed, gervais
from mcgkit.prover import (
    Justification,
    ProofScript,
    ProofStep,
    ScriptBuilder,
    SearchConfig,
    StepError,
    check_script,
    check_step,
    find_justification,
    load_scripts,
    mirror_script,
    replay_words,
    reverse_script,
    save_script,
    save_scripts,
    search_equal,
    verify_homomorphism,
)
from mcgkit.words import EMPTY, Letter, Word, a, b, free_reduce, invert, parse_word

P20 = SurfaceParams(2, 0)
G20 = gervais(P20)


def W(text):
    return parse_word(text, 2)


def test_check_step_braid_sub():
    step = ProofStep("sub", 0, 3, W("b a1 b"), just=Justification("braid(b,a1)"))
    # relator is stored as b a1 b a1' b' a1' or a1 b a1 b' a1' b' depending on order;
    # find_justification computes the right (inv, offset), so go through it instead
    just = find_justification(G20, W("a1 b a1"), W("b a1 b"))
    step = ProofStep("sub", 0, 3, W("b a1 b"), just=just)
    assert check_step(G20, W("a1 b a1"), step) == W("b a1 b")


def test_check_step_handle():
    p21 = gervais(SurfaceParams(2, 1))
    just = find_justification(p21, parse_word("c{2,3}", 3), parse_word("c{1,2}", 3))
    step = ProofStep("sub", 0, 1, parse_word("c{1,2}", 3), just=just)
    assert check_step(p21, parse_word("c{2,3}", 3), step) == parse_word("c{1,2}", 3)


def test_check_step_free_insert():
    step = ProofStep("ins", 1, letter=Letter(a(1), 1))
    assert check_step(G20, W("b"), step) == W("b a1 a1'")


def test_check_step_rejects_bad_justification():
    just = find_justification(G20, W("a1 b a1"), W("b a1 b"))
    step = ProofStep("sub", 0, 3, W("b a1 b"), just=just)
    with pytest.raises(StepError):
        check_step(G20, W("a1 b a2"), step)


def test_check_step_rejects_unknown_relator():
    step = ProofStep("sub", 0, 1, EMPTY, just=Justification("nope"))
    with pytest.raises(StepError):
        check_step(G20, W("a1"), step)


def test_check_step_out_of_bounds():
    just = find_justification(G20, W("a1 b a1"), W("b a1 b"))
    with pytest.raises(StepError):
        check_step(G20, W("a1"), ProofStep("sub", 0, 3, W("b a1 b"), just=just))


def test_empty_script_ok():
    s = ProofScript("noop", G20.name, W("b"), (), W("b"))
    assert check_script(G20, s).ok


def test_script_end_mismatch_reported():
    s = ProofScript("bad", G20.name, W("b"), (), W("a1"))
    rep = check_script(G20, s)
    assert not rep.ok and rep.failed_step is None


def test_perturbed_position_caught():
    bld = ScriptBuilder(G20, "a1 b a1 b1", "t", n=2)
    bld.apply("a1 b a1", "b a1 b")
    script = bld.finish()
    bad_steps = (ProofStep("sub", 1, 3, script.steps[0].replacement, just=script.steps[0].just),)
    bad = ProofScript("t", G20.name, script.start, bad_steps, script.end)
    assert not check_script(G20, bad).ok


def test_builder_expect_and_find():
    bld = ScriptBuilder(G20, "a1 a2 a1 a2", "t", n=2)
    assert bld.find("a1 a2", occurrence=1) == 2
    bld.apply("a2 a1", "a1 a2")
    bld.expect("a1 a1 a2 a2")
    with pytest.raises(StepError):
        bld.expect("a1")


def test_builder_block_commute():
    bld = ScriptBuilder(G20, "a1 a1 c{1,2} c{2,1}", "t", n=2)
    bld.commute_block(0, 2, 2)
    assert bld.word == W("c{1,2} c{2,1} a1 a1")


def test_builder_ins_conj_and_reduce():
    bld = ScriptBuilder(G20, "b", "t", n=2)
    bld.ins_conj(1, "a1 a2")
    assert bld.word == W("b a1 a2 a2' a1'")
    bld.reduce_all()
    assert bld.word == W("b")


def test_reverse_and_mirror_round_trip():
    bld = ScriptBuilder(G20, "a1 b a1 b1", "t", n=2)
    bld.apply("a1 b a1", "b a1 b").apply("b b1", "b1 b", occurrence=0, at=2)
    script = bld.finish()
    rev = reverse_script(G20, script)
    assert rev.start == script.end and rev.end == script.start
    assert check_script(G20, rev).ok
    mir = mirror_script(G20, script)
    assert mir.start == invert(script.start) and mir.end == invert(script.end)
    assert check_script(G20, mir).ok


def test_replay_words_length():
    bld = ScriptBuilder(G20, "a1 b a1", "t", n=2)
    bld.apply("a1 b a1", "b a1 b")
    script = bld.finish()
    ws = replay_words(G20, script)
    assert len(ws) == len(script.steps) + 1


def test_search_braid_depth1():
    s = search_equal(G20, W("a1 b a1"), W("b a1 b"), SearchConfig(max_depth=1, max_length=8))
    assert s is not None and check_script(G20, s).ok


def test_search_commutator_depth1():
    s = search_equal(G20, W("a1 a2"), W("a2 a1"), SearchConfig(max_depth=1, max_length=8))
    assert s is not None and check_script(G20, s).ok


def test_search_distinct_generators_fail():
    assert search_equal(G20, W("a1"), W("a2"), SearchConfig(max_depth=2, max_length=8)) is None


def test_search_respects_relator_filter():
    cfg = SearchConfig(max_depth=1, max_length=8, relator_ids=frozenset({"handle(1)"}))
    assert search_equal(G20, W("a1 b a1"), W("b a1 b"), cfg) is None


@settings(max_examples=15, deadline=None)
@given(st.lists(st.sampled_from(["a1", "b", "a2", "b1", "a1'", "b'", "a2'", "b1'"]),
                min_size=0, max_size=4))
def test_search_results_always_check(tokens):
    w1 = W(" ".join(tokens))
    found = search_equal(G20, w1, w1, SearchConfig(max_depth=1, max_length=10))
    assert found is not None and check_script(G20, found).ok


def test_script_file_round_trip():
    bld = ScriptBuilder(G20, "a1 b a1 a1 a1'", "demo", n=2)
    bld.apply("a1 b a1", "b a1 b").cancel(3).ins(0, "b'")
    script = bld.finish()
    text = save_scripts([script])
    back = load_scripts(text)
    assert len(back) == 1
    assert back[0] == script
    assert save_scripts(back) == text


def test_script_file_empty_replacement():
    bld = ScriptBuilder(G20, "a1 a2 a1' a2'", "erase", n=2)
    bld.sub(0, 4, EMPTY)
    script = bld.finish(EMPTY)
    text = save_script(script)
    back = load_scripts(text)[0]
    assert back == script and check_script(G20, back).ok


def test_verify_homomorphism_identity_map():
    images = {g: Word((Letter(g, 1),)) for g in G20.generators}
    rep = verify_homomorphism(G20, images, G20)
    assert rep.ok and all(i.method == "search" for i in rep.items)


def test_verify_homomorphism_missing_image():
    with pytest.raises(KeyError):
        verify_homomorphism(G20, {}, G20)


def test_verify_homomorphism_bad_certificate_start():
    bh = birman_hilden_2_0()
    g20c = g20_collapsed()
    images = {bh.generators[i]: Word((Letter(g20c.generators[j], 1),))
              for i, j in enumerate([0, 1, 2, 3, 4])}
    cert = ProofScript("wrong", g20c.name, parse_word("a1"), (), parse_word("a1"))
    rep = verify_homomorphism(bh, images, g20c, certificates={"i(1,3)": cert},
                              fallback=SearchConfig(1, 8))
    item = next(i for i in rep.items if i.relator_id == "i(1,3)")
    assert not item.ok and item.method == "certificate"
