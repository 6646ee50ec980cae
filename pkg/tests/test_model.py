"""Core model: declaration conflicts, set semantics, order independence."""

from __future__ import annotations

import random

from helpers import CORPUS, error_codes, load_source

from okc.frontend import parse
from okc.kernel import kernel_ontology, merge_with_kernel
from okc.model import (
    ConceptDecl,
    Fact,
    InstanceDecl,
    Loader,
    MetaLabel,
    RelationDecl,
    add_declaration,
)


def test_add_concept_to_kernel():
    onto, diags = add_declaration(
        kernel_ontology(), ConceptDecl("Diagnosis", ("Reasoning",)))
    assert diags == []
    assert onto.concepts["Diagnosis"].parents == ("Reasoning",)


def test_add_concept_with_undeclared_parent_is_a_conflict():
    onto, diags = add_declaration(
        kernel_ontology(), ConceptDecl("Diagnosis", ("Reasonin",)))
    assert onto is None
    assert error_codes(diags) == ["E3"]


def test_reading_same_name_with_different_parents_is_a_conflict():
    base, _ = add_declaration(kernel_ontology(), ConceptDecl("Diagnosis", ("Reasoning",)))
    onto, diags = add_declaration(base, ConceptDecl("Diagnosis", ("Communication",)))
    assert onto is None
    assert error_codes(diags) == ["E1"]


def test_identical_redeclaration_is_a_no_op():
    base, _ = add_declaration(kernel_ontology(), ConceptDecl("Diagnosis", ("Reasoning",)))
    onto, diags = add_declaration(base, ConceptDecl("Diagnosis", ("Reasoning",)))
    assert diags == []
    assert onto == base


def test_kernel_concept_redefinition_rejected():
    onto, diags = add_declaration(
        kernel_ontology(), ConceptDecl("Reasoning", ("STV",)))
    assert onto is None
    assert error_codes(diags) == ["E2"]


def test_cross_kind_name_collision():
    base, _ = add_declaration(kernel_ontology(), ConceptDecl("Widget", ("PT",)))
    onto, diags = add_declaration(base, InstanceDecl("Widget", ("Model",)))
    assert onto is None
    assert error_codes(diags) == ["E1"]


def test_instance_name_colliding_with_kernel_relation():
    onto, diags = add_declaration(kernel_ontology(), InstanceDecl("PC", ("Model",)))
    assert onto is None
    assert error_codes(diags) == ["E2"]


def test_duplicate_label_triple_rejected_even_when_identical():
    loader = Loader(kernel_ontology())
    loader.add(ConceptDecl("Diagnosis", ("Reasoning",)))
    loader.add(MetaLabel("Task", "Diagnosis", 1))
    loader.add(MetaLabel("Task", "Diagnosis", 1))
    onto, diags = loader.finalize()
    assert onto is None
    assert error_codes(diags) == ["E5"]


def test_fact_shape_errors():
    loader = Loader(kernel_ontology())
    loader.add(InstanceDecl("m", ("Model",)))
    loader.add(InstanceDecl("d", ("Reasoning",)))
    loader.add(Fact("PC", ("m", "d"), None))        # temporal relation, no time
    loader.add(Fact("isDataOf", ("m", "d"), 3))     # atemporal relation with time
    loader.add(Fact("isDataOf", ("m",), None))      # arity mismatch
    onto, diags = loader.finalize()
    assert onto is None
    assert error_codes(diags) == ["E4", "E4", "E4"]


def test_fact_argument_must_be_instance():
    loader = Loader(kernel_ontology())
    loader.add(InstanceDecl("d", ("Reasoning",)))
    loader.add(Fact("isDataOf", ("Model", "d"), None))
    onto, diags = loader.finalize()
    assert onto is None
    assert error_codes(diags) == ["E3"]


def test_particularization_arity_and_cycles():
    loader = Loader(kernel_ontology())
    loader.add(RelationDecl("narrow", (("ED",),), particularizes="PC"))
    onto, diags = loader.finalize()
    assert onto is None
    assert error_codes(diags) == ["E7"]

    loader = Loader(kernel_ontology())
    loader.add(RelationDecl("a", (("ED",), ("PD",)), particularizes="b"))
    loader.add(RelationDecl("b", (("ED",), ("PD",)), particularizes="a"))
    onto, diags = loader.finalize()
    assert onto is None
    assert set(error_codes(diags)) == {"E7"}


def test_load_order_independence():
    path = "car_diagnosis.oks"
    decls, parse_diags = parse((CORPUS / path).read_text(), path)
    assert not parse_diags
    reference, diags = merge_with_kernel(decls)
    assert reference is not None and diags == []
    for seed in range(6):
        shuffled = decls[:]
        random.Random(seed).shuffle(shuffled)
        onto, diags = merge_with_kernel(shuffled)
        assert diags == []
        assert onto == reference


def test_every_identifier_resolves(car_ontology):
    onto = car_ontology
    for c in onto.concepts.values():
        for p in c.parents:
            assert p in onto.concepts
    for r in onto.relations.values():
        for union in r.signature:
            for member in union:
                assert member in onto.concepts
        if r.particularizes:
            assert r.particularizes in onto.relations
    for i in onto.instances.values():
        for c in i.concepts:
            assert c in onto.concepts
    for f in onto.facts.values():
        assert f.relation in onto.relations
        for arg in f.args:
            assert arg in onto.instances
    for lb in onto.labels.values():
        assert lb.concept in onto.concepts


def test_definition_and_parents_are_mutually_exclusive():
    from okc.model import RoleDefinition
    onto, diags = add_declaration(
        kernel_ontology(),
        ConceptDecl("Odd", ("PT",), RoleDefinition("data", "Reasoning")))
    assert onto is None
    assert error_codes(diags) == ["E4"]


def test_equality_ignores_spans():
    text = "concept Thing specializes PT\n"
    first, _ = load_source(text, "a.oks")
    second, _ = load_source("# leading comment\n" + text, "b.oks")
    assert first == second
