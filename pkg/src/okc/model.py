"""In-memory ontology model: declarations, labels, facts, diagnostics.

An Ontology is assembled through a Loader (typically by grafting parsed
declarations onto the built-in kernel) and is immutable afterwards, so a
loaded Ontology is safe for concurrent read-only use.  Equality is
structural over the declared content and ignores source spans; any
permutation of a declaration set that loads successfully therefore
produces an equal Ontology.

Identical re-declarations are collapsed silently (set semantics).  The
one exception is meta-labels: a duplicate (primitive, concept, time)
triple is a load error (E5).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional, Union


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class Origin(str, Enum):
    KERNEL = "kernel"
    USER = "user"


@dataclass(frozen=True)
class SourceSpan:
    """Location of a declaration or token inside a source file.

    Lines and columns are 1-based; kernel declarations use the
    KERNEL_SPAN sentinel (line 0).
    """

    file: str
    line: int
    column: int
    length: int = 1

    def covers(self, line: int, column: int) -> bool:
        return self.line == line and self.column <= column < self.column + max(self.length, 1)


KERNEL_SPAN = SourceSpan("<kernel>", 0, 0, 0)


@dataclass(frozen=True)
class Diagnostic:
    """One coded finding. Error-severity findings block compilation."""

    severity: Severity
    code: str
    message: str
    span: SourceSpan = KERNEL_SPAN
    subjects: tuple[str, ...] = ()

    def sort_key(self) -> tuple:
        return (self.span.file, self.span.line, self.span.column,
                self.code, self.message, self.subjects)

    def render(self) -> str:
        if self.span.line <= 0:
            return f"{self.span.file}: {self.severity.value}[{self.code}] {self.message}"
        return (f"{self.span.file}:{self.span.line}:{self.span.column}: "
                f"{self.severity.value}[{self.code}] {self.message}")

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "message": self.message,
            "file": self.span.file,
            "line": self.span.line,
            "column": self.span.column,
            "subjects": list(self.subjects),
        }


def sort_diagnostics(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=Diagnostic.sort_key)


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diags)


# --- label primitives ------------------------------------------------------

PRIMITIVES: tuple[str, ...] = (
    "Task",
    "Inference",
    "TransferFunction",
    "DomainConcept",
    "KnowledgeRole",
    "FormalKnowledgeRole",
    "MaterialKnowledgeRole",
    "Input",
    "Output",
)

KNOWLEDGE_ROLE_PRIMITIVES = frozenset(
    {"KnowledgeRole", "FormalKnowledgeRole", "MaterialKnowledgeRole", "Input", "Output"}
)

# Exclusivity families: per time point a concept may carry at most one
# label from each family.  TransferFunction forms its own family.
LABEL_FAMILY: dict[str, str] = {
    "Task": "reasoning",
    "Inference": "reasoning",
    "TransferFunction": "transfer",
    "DomainConcept": "domain",
    **{p: "domain" for p in KNOWLEDGE_ROLE_PRIMITIVES},
}


# --- meta-property axes ----------------------------------------------------

AXIS_RIGIDITY = "rigidity"
AXIS_IDENTITY = "identity"
AXIS_DEPENDENCE = "dependence"

ANNOTATION_VALUES: dict[str, tuple[str, ...]] = {
    AXIS_RIGIDITY: ("rigid", "anti-rigid", "semi-rigid"),
    AXIS_IDENTITY: ("carries", "none"),
    AXIS_DEPENDENCE: ("dependent", "independent"),
}

ANNOTATION_AXES: tuple[str, ...] = (AXIS_RIGIDITY, AXIS_IDENTITY, AXIS_DEPENDENCE)


# --- declarations ----------------------------------------------------------


@dataclass(frozen=True)
class RoleDefinition:
    """Defined concept of the form `role N = data|result of R`."""

    mode: str  # "data" | "result"
    reasoning_concept: str


@dataclass(frozen=True)
class Conjunction:
    """Defined concept of the form `concept N = Type and FormalRole`."""

    type_concept: str
    formal_role: str


Definition = Union[RoleDefinition, Conjunction]


@dataclass(frozen=True)
class ConceptDecl:
    name: str
    parents: tuple[str, ...] = ()
    definition: Optional[Definition] = None
    origin: Origin = Origin.USER
    span: SourceSpan = KERNEL_SPAN

    def content(self) -> tuple:
        return ("concept", frozenset(self.parents), self.definition)


@dataclass(frozen=True)
class RelationDecl:
    """Relation with a positional signature.

    Each signature position is a union of concept names (almost always a
    single name); a trailing time argument exists iff `temporal` is set.
    """

    name: str
    signature: tuple[tuple[str, ...], ...]
    temporal: bool = False
    particularizes: Optional[str] = None
    origin: Origin = Origin.USER
    span: SourceSpan = KERNEL_SPAN

    @property
    def arity(self) -> int:
        return len(self.signature)

    def content(self) -> tuple:
        return ("relation", self.signature, self.temporal, self.particularizes)


@dataclass(frozen=True)
class AnnotationDecl:
    """One meta-property axis value for one concept."""

    concept: str
    axis: str
    value: str
    origin: Origin = Origin.USER
    span: SourceSpan = KERNEL_SPAN


@dataclass(frozen=True)
class MetaLabel:
    """Classification of a concept by a modeling primitive at a time."""

    primitive: str
    concept: str
    time: int
    origin: Origin = Origin.USER
    span: SourceSpan = KERNEL_SPAN

    def triple(self) -> tuple[str, str, int]:
        return (self.primitive, self.concept, self.time)


@dataclass(frozen=True)
class InstanceDecl:
    name: str
    concepts: tuple[str, ...]
    origin: Origin = Origin.USER
    span: SourceSpan = KERNEL_SPAN

    def content(self) -> tuple:
        return ("instance", frozenset(self.concepts))


@dataclass(frozen=True)
class Fact:
    """Ground relational fact; `time` present iff the relation is temporal."""

    relation: str
    args: tuple[str, ...]
    time: Optional[int] = None
    origin: Origin = Origin.USER
    span: SourceSpan = KERNEL_SPAN

    def key(self) -> tuple:
        return (self.relation, self.args, self.time)


@dataclass(frozen=True)
class DisjointDecl:
    first: str
    second: str
    origin: Origin = Origin.USER
    span: SourceSpan = KERNEL_SPAN

    def pair(self) -> tuple[str, str]:
        return tuple(sorted((self.first, self.second)))  # type: ignore[return-value]


Declaration = Union[
    ConceptDecl, RelationDecl, AnnotationDecl, MetaLabel, InstanceDecl, Fact, DisjointDecl
]


# --- the ontology value ----------------------------------------------------


class Ontology:
    """Complete declared model. Treat as immutable after loading."""

    def __init__(
        self,
        concepts: dict[str, ConceptDecl],
        relations: dict[str, RelationDecl],
        instances: dict[str, InstanceDecl],
        annotations: dict[str, dict[str, AnnotationDecl]],
        labels: dict[tuple[str, str, int], MetaLabel],
        facts: dict[tuple, Fact],
        disjoints: dict[tuple[str, str], DisjointDecl],
    ):
        self.concepts = concepts
        self.relations = relations
        self.instances = instances
        self.annotations = annotations
        self.labels = labels
        self.facts = facts
        self.disjoints = disjoints

    # -- lookups

    def annotation_value(self, concept: str, axis: str) -> Optional[str]:
        decl = self.annotations.get(concept, {}).get(axis)
        return decl.value if decl else None

    def is_kernel(self, name: str) -> bool:
        decl = self.concepts.get(name) or self.relations.get(name)
        return decl is not None and decl.origin is Origin.KERNEL

    def max_label_time(self) -> int:
        return max((lb.time for lb in self.labels.values()), default=0)

    def role_definitions(self) -> list[ConceptDecl]:
        return [c for c in self.concepts.values() if isinstance(c.definition, RoleDefinition)]

    def conjunctions(self) -> list[ConceptDecl]:
        return [c for c in self.concepts.values() if isinstance(c.definition, Conjunction)]

    def iter_declarations(self) -> Iterator[Declaration]:
        yield from self.concepts.values()
        yield from self.relations.values()
        yield from self.disjoints.values()
        for per_concept in self.annotations.values():
            yield from per_concept.values()
        yield from self.instances.values()
        yield from self.facts.values()
        yield from self.labels.values()

    # -- equality (structural, span-insensitive)

    def _snapshot(self) -> tuple:
        return (
            {n: (c.content(), c.origin) for n, c in self.concepts.items()},
            {n: (r.content(), r.origin) for n, r in self.relations.items()},
            {n: (i.content(), i.origin) for n, i in self.instances.items()},
            {(c, a): (d.value, d.origin)
             for c, per in self.annotations.items() for a, d in per.items()},
            frozenset(self.labels),
            frozenset(self.facts),
            frozenset(self.disjoints),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return self._snapshot() == other._snapshot()

    __hash__ = None  # type: ignore[assignment]


# --- loading ---------------------------------------------------------------


def _direct_supers(concept: ConceptDecl) -> tuple[str, ...]:
    """Asserted parents plus supertypes implied by the definition form."""
    implied: tuple[str, ...] = ()
    if isinstance(concept.definition, RoleDefinition):
        implied = ("Data",) if concept.definition.mode == "data" else ("Result",)
    elif isinstance(concept.definition, Conjunction):
        implied = (concept.definition.type_concept, concept.definition.formal_role)
    return concept.parents + implied


class Loader:
    """Accumulates declarations, then resolves them into an Ontology.

    Resolution is two-phase: every declaration is staged first, then
    names are resolved over the complete set, which makes the result
    independent of declaration order.
    """

    def __init__(self, base: Optional[Ontology] = None):
        self._staged: list[Declaration] = []
        if base is not None:
            self._staged.extend(base.iter_declarations())

    def add(self, decl: Declaration) -> "Loader":
        self._staged.append(decl)
        return self

    def add_all(self, decls: Iterable[Declaration]) -> "Loader":
        self._staged.extend(decls)
        return self

    # -- finalization

    def finalize(self) -> tuple[Optional[Ontology], list[Diagnostic]]:
        diags: list[Diagnostic] = []

        concepts = self._collapse_named(
            [d for d in self._staged if isinstance(d, ConceptDecl)], diags)
        relations = self._collapse_named(
            [d for d in self._staged if isinstance(d, RelationDecl)], diags)
        instances = self._collapse_named(
            [d for d in self._staged if isinstance(d, InstanceDecl)], diags)
        self._check_cross_kind(concepts, relations, instances, diags)

        annotations = self._collapse_annotations(
            [d for d in self._staged if isinstance(d, AnnotationDecl)], diags)
        labels = self._collapse_labels(
            [d for d in self._staged if isinstance(d, MetaLabel)], diags)

        facts: dict[tuple, Fact] = {}
        for f in (d for d in self._staged if isinstance(d, Fact)):
            facts.setdefault(f.key(), f)
        disjoints: dict[tuple[str, str], DisjointDecl] = {}
        for dis in (d for d in self._staged if isinstance(d, DisjointDecl)):
            disjoints.setdefault(dis.pair(), dis)

        onto = Ontology(concepts, relations, instances, annotations, labels, facts, disjoints)
        self._check_references(onto, diags)

        diags = sort_diagnostics(diags)
        if has_errors(diags):
            return None, diags
        return onto, diags

    # -- duplicate handling

    @staticmethod
    def _span_order(decl) -> tuple:
        return (decl.origin is not Origin.KERNEL, decl.span.file, decl.span.line, decl.span.column)

    def _collapse_named(self, decls, diags: list[Diagnostic]) -> dict:
        grouped: dict[str, list] = {}
        for d in decls:
            grouped.setdefault(d.name, []).append(d)
        out = {}
        for name in grouped:
            group = sorted(grouped[name], key=self._span_order)
            canonical = group[0]
            out[name] = canonical
            for other in group[1:]:
                if other.content() == canonical.content():
                    continue  # identical re-declaration: set semantics
                if canonical.origin is Origin.KERNEL:
                    diags.append(Diagnostic(
                        Severity.ERROR, "E2",
                        f"'{name}' redefines a kernel declaration",
                        other.span, (name,)))
                else:
                    diags.append(Diagnostic(
                        Severity.ERROR, "E1",
                        f"duplicate declaration of '{name}' with different content",
                        other.span, (name,)))
        return out

    def _check_cross_kind(self, concepts, relations, instances, diags) -> None:
        # Concepts, relations and instances share one namespace.
        kinds = [("concept", concepts), ("relation", relations), ("instance", instances)]
        for i, (kind_a, map_a) in enumerate(kinds):
            for kind_b, map_b in kinds[i + 1:]:
                for name in sorted(set(map_a) & set(map_b)):
                    a, b = map_a[name], map_b[name]
                    first, second = sorted((a, b), key=self._span_order)
                    code = "E2" if first.origin is Origin.KERNEL else "E1"
                    what = ("redefines a kernel declaration" if code == "E2"
                            else f"already declared as a {kind_a if second is b else kind_b}")
                    diags.append(Diagnostic(
                        Severity.ERROR, code, f"'{name}' {what}", second.span, (name,)))

    def _collapse_annotations(self, decls, diags) -> dict[str, dict[str, AnnotationDecl]]:
        grouped: dict[tuple[str, str], list[AnnotationDecl]] = {}
        for d in decls:
            grouped.setdefault((d.concept, d.axis), []).append(d)
        out: dict[str, dict[str, AnnotationDecl]] = {}
        for (concept, axis) in grouped:
            group = sorted(grouped[(concept, axis)], key=self._span_order)
            canonical = group[0]
            if canonical.value not in ANNOTATION_VALUES.get(axis, ()):
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"invalid {axis} value '{canonical.value}' for '{concept}'",
                    canonical.span, (concept,)))
                continue
            out.setdefault(concept, {})[axis] = canonical
            for other in group[1:]:
                if other.value != canonical.value:
                    diags.append(Diagnostic(
                        Severity.ERROR, "E6",
                        f"conflicting {axis} annotation for '{concept}': "
                        f"'{canonical.value}' vs '{other.value}'",
                        other.span, (concept,)))
        return out

    def _collapse_labels(self, decls, diags) -> dict[tuple[str, str, int], MetaLabel]:
        out: dict[tuple[str, str, int], MetaLabel] = {}
        grouped: dict[tuple[str, str, int], list[MetaLabel]] = {}
        for d in decls:
            grouped.setdefault(d.triple(), []).append(d)
        for triple in grouped:
            group = sorted(grouped[triple], key=self._span_order)
            out[triple] = group[0]
            for other in group[1:]:
                diags.append(Diagnostic(
                    Severity.ERROR, "E5",
                    f"duplicate label ({other.primitive}, {other.concept}, {other.time})",
                    other.span, (other.concept,)))
        return out

    # -- reference and shape checking

    def _check_references(self, onto: Ontology, diags: list[Diagnostic]) -> None:
        def need_concept(name: str, span: SourceSpan, context: str) -> None:
            if name not in onto.concepts:
                kind = "relation" if name in onto.relations else (
                    "instance" if name in onto.instances else None)
                detail = f"names a {kind}, not a concept" if kind else "is not declared"
                diags.append(Diagnostic(
                    Severity.ERROR, "E3", f"{context}: '{name}' {detail}", span, (name,)))

        for c in sorted(onto.concepts.values(), key=lambda d: d.name):
            if c.definition is not None and c.parents:
                # The statement grammar offers either form, never both.
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"concept '{c.name}' has both asserted parents and a definition",
                    c.span, (c.name,)))
            for p in c.parents:
                need_concept(p, c.span, f"parent of '{c.name}'")
            if isinstance(c.definition, RoleDefinition):
                need_concept(c.definition.reasoning_concept, c.span,
                             f"reasoning concept of role '{c.name}'")
            elif isinstance(c.definition, Conjunction):
                need_concept(c.definition.type_concept, c.span,
                             f"conjunct of '{c.name}'")
                need_concept(c.definition.formal_role, c.span,
                             f"conjunct of '{c.name}'")

        for r in sorted(onto.relations.values(), key=lambda d: d.name):
            for position in r.signature:
                for member in position:
                    need_concept(member, r.span, f"signature of relation '{r.name}'")
            if not r.signature:
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"relation '{r.name}' has an empty signature", r.span, (r.name,)))
            if r.particularizes is not None:
                parent = onto.relations.get(r.particularizes)
                if parent is None:
                    diags.append(Diagnostic(
                        Severity.ERROR, "E3",
                        f"relation '{r.name}' particularizes undeclared "
                        f"relation '{r.particularizes}'", r.span, (r.name, r.particularizes)))
                elif parent.arity != r.arity:
                    diags.append(Diagnostic(
                        Severity.ERROR, "E7",
                        f"relation '{r.name}' (arity {r.arity}) particularizes "
                        f"'{parent.name}' (arity {parent.arity})", r.span,
                        (r.name, parent.name)))
        self._check_particularization_cycles(onto, diags)

        for inst in sorted(onto.instances.values(), key=lambda d: d.name):
            for cname in inst.concepts:
                need_concept(cname, inst.span, f"concept of instance '{inst.name}'")

        for lb in sorted(onto.labels.values(), key=lambda d: d.triple()):
            if lb.primitive not in PRIMITIVES:
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"unknown modeling primitive '{lb.primitive}'", lb.span, (lb.concept,)))
            need_concept(lb.concept, lb.span, f"label {lb.primitive}")
            if lb.time < 0:
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"negative label time {lb.time}", lb.span, (lb.concept,)))

        for per_concept in onto.annotations.values():
            for ann in per_concept.values():
                need_concept(ann.concept, ann.span, f"annotate {ann.axis}")

        for dis in sorted(onto.disjoints.values(), key=lambda d: d.pair()):
            need_concept(dis.first, dis.span, "disjointness")
            need_concept(dis.second, dis.span, "disjointness")
            if dis.first == dis.second:
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"'{dis.first}' declared disjoint with itself", dis.span, (dis.first,)))

        for f in sorted(onto.facts.values(), key=lambda d: d.key()):
            rel = onto.relations.get(f.relation)
            if rel is None:
                kind = "concept" if f.relation in onto.concepts else None
                detail = "names a concept, not a relation" if kind else "is not declared"
                diags.append(Diagnostic(
                    Severity.ERROR, "E3",
                    f"fact relation '{f.relation}' {detail}", f.span, (f.relation,)))
                continue
            if len(f.args) != rel.arity:
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"fact {f.relation} expects {rel.arity} argument(s), got {len(f.args)}",
                    f.span, (f.relation,)))
            if rel.temporal and f.time is None:
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"fact {f.relation} requires a trailing time point", f.span, (f.relation,)))
            if not rel.temporal and f.time is not None:
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"fact {f.relation} takes no time point", f.span, (f.relation,)))
            if f.time is not None and f.time < 0:
                diags.append(Diagnostic(
                    Severity.ERROR, "E4",
                    f"negative time point {f.time}", f.span, (f.relation,)))
            for arg in f.args:
                if arg not in onto.instances:
                    kind = "concept" if arg in onto.concepts else (
                        "relation" if arg in onto.relations else None)
                    detail = f"names a {kind}, not an instance" if kind else "is not declared"
                    diags.append(Diagnostic(
                        Severity.ERROR, "E3",
                        f"fact argument '{arg}' {detail}", f.span, (arg,)))

    @staticmethod
    def _check_particularization_cycles(onto: Ontology, diags: list[Diagnostic]) -> None:
        for name in sorted(onto.relations):
            seen = [name]
            current = onto.relations[name].particularizes
            while current is not None:
                if current in seen:
                    diags.append(Diagnostic(
                        Severity.ERROR, "E7",
                        f"particularization cycle through '{name}'",
                        onto.relations[name].span, tuple(seen)))
                    break
                seen.append(current)
                rel = onto.relations.get(current)
                current = rel.particularizes if rel else None


def add_declaration(
    ontology: Ontology, decl: Declaration
) -> tuple[Optional[Ontology], list[Diagnostic]]:
    """Return an updated ontology, or the conflict report that rejects it."""
    return Loader(ontology).add(decl).finalize()


def load_declarations(
    ontology: Ontology, decls: Iterable[Declaration]
) -> tuple[Optional[Ontology], list[Diagnostic]]:
    return Loader(ontology).add_all(decls).finalize()
