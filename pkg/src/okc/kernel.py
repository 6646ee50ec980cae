"""Built-in upper ontology preloaded into every model.

The kernel has four layers:

* foundational categories: particulars (PT) split into endurants (ED,
  further: POB/NPOB/MOB and the agentive APO/ASO) and perdurants (PD,
  further: EV/STV/ACC and actions AC);
* problem-solving actions: Reasoning, Interaction, Communication;
* mental-object categories: Document, Expression, and Content with its
  Proposition/IdaConcept branch (Message, Assertion, Model, Hypothesis,
  Complaint, Information, Discourse, Subject);
* participation roles: Patient, Data, Result, wired to the relations
  PC, PRE, isAgentOf, isAffectedBy, isDataOf, isResultOf, hasForSubject.

`IdaConcept` is the mental-object category usually called "concept";
the longer name avoids colliding with the modeling-level word.

Agentivity is not a kernel concept: it is the extensional union of APO
and ASO, expressed as the union signature position of `isAgentOf`.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .model import (
    AnnotationDecl,
    ConceptDecl,
    Declaration,
    Diagnostic,
    DisjointDecl,
    Loader,
    Ontology,
    Origin,
    RelationDecl,
    AXIS_DEPENDENCE,
    AXIS_RIGIDITY,
)

# Relation names used by rules and checks.
REL_PARTICIPATION = "PC"
REL_PRESENCE = "PRE"
REL_AGENT = "isAgentOf"
REL_AFFECTED = "isAffectedBy"
REL_DATA = "isDataOf"
REL_RESULT = "isResultOf"
REL_SUBJECT = "hasForSubject"

# Concept names referenced from code.
PARTICULAR = "PT"
ENDURANT = "ED"
PERDURANT = "PD"
ACTION = "AC"
AGENTIVE_UNION = ("APO", "ASO")
CONTENT = "Content"
PROPOSITION = "Proposition"
IDA_CONCEPT = "IdaConcept"
SUBJECT = "Subject"
REASONING = "Reasoning"
INTERACTION = "Interaction"
COMMUNICATION = "Communication"
PATIENT = "Patient"
DATA = "Data"
RESULT = "Result"

# (name, parents)
_CONCEPTS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("PT", ()),
    ("ED", ("PT",)),
    ("PD", ("PT",)),
    ("POB", ("ED",)),
    ("NPOB", ("ED",)),
    ("MOB", ("NPOB",)),
    ("APO", ("POB",)),
    ("ASO", ("NPOB",)),
    ("EV", ("PD",)),
    ("STV", ("PD",)),
    ("ACC", ("EV",)),
    ("AC", ("ACC",)),
    ("Reasoning", ("AC",)),
    ("Interaction", ("AC",)),
    ("Communication", ("Interaction",)),
    ("Document", ("POB",)),
    ("Expression", ("NPOB",)),
    ("Content", ("MOB",)),
    ("Proposition", ("Content",)),
    ("IdaConcept", ("Content",)),
    ("Subject", ("IdaConcept",)),
    ("Message", ("Proposition",)),
    ("Assertion", ("Proposition",)),
    ("Model", ("Proposition",)),
    ("Hypothesis", ("Proposition",)),
    ("Complaint", ("Message",)),
    ("Information", ("Message",)),
    ("Discourse", ("Expression",)),
    ("Patient", ("ED",)),
    ("Data", ("Patient", "Content")),
    ("Result", ("Patient", "Content")),
)

# (name, particularizes, signature, temporal)
_RELATIONS: tuple[tuple[str, Optional[str], tuple[tuple[str, ...], ...], bool], ...] = (
    (REL_PARTICIPATION, None, (("ED",), ("PD",)), True),
    (REL_PRESENCE, None, (("PD",),), True),
    (REL_AGENT, None, (AGENTIVE_UNION, ("AC",)), False),
    (REL_AFFECTED, REL_PARTICIPATION, (("ED",), ("PD",)), False),
    (REL_DATA, REL_AFFECTED, (("Content",), ("AC",)), False),
    (REL_RESULT, REL_AFFECTED, (("Content",), ("AC",)), False),
    (REL_SUBJECT, None, (("Proposition",), ("IdaConcept",)), False),
)

_DISJOINT: tuple[tuple[str, str], ...] = (
    ("ED", "PD"),
    ("Reasoning", "Communication"),
)

_RIGID = ("PT", "ED", "PD", "POB", "NPOB", "MOB", "APO", "ASO", "EV", "STV", "ACC", "AC")
_PARTICIPATION_ROLES = ("Patient", "Data", "Result")


def kernel_declarations() -> list[Declaration]:
    decls: list[Declaration] = []
    for name, parents in _CONCEPTS:
        decls.append(ConceptDecl(name, parents, origin=Origin.KERNEL))
    for name, parent, signature, temporal in _RELATIONS:
        decls.append(RelationDecl(
            name, signature, temporal=temporal, particularizes=parent, origin=Origin.KERNEL))
    for a, b in _DISJOINT:
        decls.append(DisjointDecl(a, b, origin=Origin.KERNEL))
    for name in _RIGID:
        decls.append(AnnotationDecl(name, AXIS_RIGIDITY, "rigid", origin=Origin.KERNEL))
    for name in _PARTICIPATION_ROLES:
        decls.append(AnnotationDecl(name, AXIS_RIGIDITY, "anti-rigid", origin=Origin.KERNEL))
        decls.append(AnnotationDecl(name, AXIS_DEPENDENCE, "dependent", origin=Origin.KERNEL))
    return decls


_KERNEL: Optional[Ontology] = None


def kernel_ontology() -> Ontology:
    """The kernel as a loaded Ontology (shared immutable instance)."""
    global _KERNEL
    if _KERNEL is None:
        onto, diags = Loader().add_all(kernel_declarations()).finalize()
        if onto is None:  # pragma: no cover - would be a packaging bug
            raise RuntimeError(f"kernel failed to load: {[d.render() for d in diags]}")
        _KERNEL = onto
    return _KERNEL


def merge_with_kernel(
    decls: Iterable[Declaration],
) -> tuple[Optional[Ontology], list[Diagnostic]]:
    """Graft user declarations onto the kernel; kernel names stay fixed."""
    return Loader(kernel_ontology()).add_all(decls).finalize()


def is_agentive(memberships: set[str]) -> bool:
    """Union test standing in for an agentive category."""
    return any(c in memberships for c in AGENTIVE_UNION)
