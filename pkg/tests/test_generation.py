import random

import pytest

from evex.codec import CodecConfig, build_argument_prompt, build_trigger_prompt
from evex.corpus import TASK_TRIGGER, TrainingPair
from evex.events import ArgumentPair, ContextInstance, EventFrame, Trigger
from evex.generation import (
    BackendError,
    GenerationConfig,
    ScriptedBackend,
    attach_argument_cache,
    candidate_list_from_dict,
    candidate_list_to_dict,
    frames_from_cache,
    generate_arguments,
    generate_trigger_candidates,
    toy_backend,
)

CFG = CodecConfig()
GEN = GenerationConfig()


def test_generation_config_defaults_and_validation():
    assert (GEN.beam_width, GEN.max_input_len, GEN.max_output_len) == (10, 650, 200)
    with pytest.raises(ValueError):
        GenerationConfig(beam_width=0)
    with pytest.raises(ValueError):
        GenerationConfig(max_output_len=0)


def test_scripted_backend_contract():
    prompt = "TriggerEvent: x ."
    backend = toy_backend({prompt: [("a [T]", -0.5), ("b [T]", -0.1), ("c [T]", -0.9)]})
    top = backend.generate_topk(prompt, 2)
    assert top == [("b [T]", -0.1), ("a [T]", -0.5)]  # sorted, truncated to k
    assert backend.generate_greedy(prompt) == "b [T]"
    assert backend.generate_topk("unscripted", 5) == []
    assert backend.generate_greedy("unscripted") == ""


def test_scripted_backend_scores_non_increasing():
    rng = random.Random(9)
    for _ in range(30):
        entries = [(f"h{i} [T]", rng.uniform(-5, 0)) for i in range(rng.randint(1, 8))]
        backend = ScriptedBackend({"p": entries})
        scores = [s for _, s in backend.generate_topk("p", rng.randint(1, 10))]
        assert all(a >= b for a, b in zip(scores, scores[1:]))
        assert len(scores) <= len(entries)


def test_scripted_backend_fit_memorizes_new_inputs_only():
    backend = ScriptedBackend({"kept": [("orig [T]", -0.1)]})
    pairs = [
        TrainingPair("kept", "override [T]", TASK_TRIGGER, "d"),
        TrainingPair("new", "first [T]", TASK_TRIGGER, "d"),
        TrainingPair("new", "second [T]", TASK_TRIGGER, "d"),
        TrainingPair("new", "first [T]", TASK_TRIGGER, "d"),
    ]
    backend.fit(pairs)
    assert backend.generate_greedy("kept") == "orig [T]"
    assert backend.generate_topk("new", 5) == [("first [T]", 0.0), ("second [T]", -1.0)]


def instance(context="He went home .", frames=()):
    return ContextInstance("doc-1", context, tuple(frames))


def test_candidate_dedup_keeps_highest_beam_score():
    prompt = build_trigger_prompt("He went home .", CFG)
    backend = toy_backend(
        {prompt: [("went [Movement_Transport]", -0.1), ("went [Movement_Transport]", -0.4)]}
    )
    cl, warnings = generate_trigger_candidates(backend, instance(), GEN, CFG)
    assert len(cl.candidates) == 1
    assert cl.candidates[0].beam_score == -0.1
    assert warnings == []


def test_unparseable_hypothesis_dropped_with_warning():
    prompt = build_trigger_prompt("He went home .", CFG)
    backend = toy_backend({prompt: [("killed [Life_Die]", -0.2), ("noise", -0.3)]})
    cl, warnings = generate_trigger_candidates(backend, instance(), GEN, CFG)
    assert len(cl.candidates) == 1
    assert len(warnings) == 1


def test_backend_with_fewer_hypotheses_than_beam_width():
    prompt = build_trigger_prompt("He went home .", CFG)
    backend = toy_backend({prompt: [(f"w{i} [T]", -float(i)) for i in range(3)]})
    cl, _ = generate_trigger_candidates(backend, instance(), GEN, CFG)
    assert len(cl.candidates) == 3


def test_empty_token_survives_as_no_event_candidate():
    prompt = build_trigger_prompt("He went home .", CFG)
    backend = toy_backend({prompt: [("[none]", -0.1), ("went [T]", -0.5)]})
    cl, _ = generate_trigger_candidates(backend, instance(), GEN, CFG)
    assert [c.raw_text for c in cl.candidates] == ["[none]", "went [T]"]
    assert cl.candidates[0].triggers == ()


def test_candidates_sorted_and_truncated():
    prompt = build_trigger_prompt("He went home .", CFG)
    entries = [(f"w{i} [T]", -0.1 * i) for i in range(15)]
    backend = toy_backend({prompt: entries})
    cl, _ = generate_trigger_candidates(backend, instance(), GEN, CFG)
    assert len(cl.candidates) == GEN.beam_width
    scores = [c.beam_score for c in cl.candidates]
    assert scores == sorted(scores, reverse=True)


def test_backend_failure_carries_doc_id():
    class Exploding(ScriptedBackend):
        def generate_topk(self, input_text, k):
            raise RuntimeError("boom")

    with pytest.raises(BackendError, match="doc-1"):
        generate_trigger_candidates(Exploding(), instance(), GEN, CFG)


def test_generate_arguments_decodes_target():
    context = "And gave ... then went home ... killed him ."
    prompt = build_argument_prompt(context, "killed", CFG)
    backend = toy_backend(
        {prompt: [("<Agent> father - in - law </Agent> <Place> home </Place>", -0.05)]}
    )
    pairs, warnings = generate_arguments(backend, context, Trigger("killed", "Life_Die"), CFG)
    assert pairs == [ArgumentPair("Agent", "father - in - law"), ArgumentPair("Place", "home")]
    assert warnings == []


def test_generate_arguments_all_none_slots():
    context = "He went home ."
    prompt = build_argument_prompt(context, "went", CFG)
    backend = toy_backend({prompt: [("<Artifact> [None] </Artifact> <Place> [None] </Place>", -0.1)]})
    pairs, warnings = generate_arguments(backend, context, Trigger("went", "Movement_Transport"), CFG)
    assert pairs == [] and warnings == []


def test_generate_arguments_malformed_output():
    context = "He went home ."
    prompt = build_argument_prompt(context, "went", CFG)
    backend = toy_backend({prompt: [("<Artifact> half open", -0.1)]})
    pairs, warnings = generate_arguments(backend, context, Trigger("went", "T"), CFG)
    assert pairs == [] and warnings


def test_argument_cache_and_frame_assembly():
    context = "a b c ."
    trig_prompt = build_trigger_prompt(context, CFG)
    arg_prompt = build_argument_prompt(context, "b", CFG)
    backend = toy_backend(
        {
            trig_prompt: [("b [T]", -0.1)],
            arg_prompt: [("<R> a </R>", -0.1)],
        }
    )
    cl, _ = generate_trigger_candidates(backend, instance(context), GEN, CFG)
    cl, warnings = attach_argument_cache(backend, cl, CFG)
    assert warnings == []
    assert cl.arguments_by_word == {"b": (ArgumentPair("R", "a"),)}
    frames = frames_from_cache(cl, [Trigger("b", "T")])
    assert frames == [EventFrame(Trigger("b", "T"), (ArgumentPair("R", "a"),))]


def test_candidate_generation_deterministic():
    rng = random.Random(4)
    context = "alpha beta gamma ."
    prompt = build_trigger_prompt(context, CFG)
    entries = [(f"w{i} [T{i % 2}]", rng.uniform(-3, 0)) for i in range(8)]
    backend = toy_backend({prompt: entries})
    first, _ = generate_trigger_candidates(backend, instance(context), GEN, CFG)
    second, _ = generate_trigger_candidates(backend, instance(context), GEN, CFG)
    assert first == second


def test_candidate_list_dict_roundtrip():
    context = "a b ."
    prompt = build_trigger_prompt(context, CFG)
    backend = toy_backend({prompt: [("a [T]", -0.25), ("[none]", -0.5)]})
    lists, _ = generate_trigger_candidates(backend, instance(context), GEN, CFG)
    lists = lists.with_rank_scores([0.5, -0.5])
    raw = candidate_list_to_dict(lists)
    assert candidate_list_from_dict(raw) == lists
