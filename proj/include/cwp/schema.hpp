#ifndef CWP_SCHEMA_HPP
#define CWP_SCHEMA_HPP

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cwp/term.hpp"
#include "cwp/triple_store.hpp"

namespace cwp {

// ---------------------------------------------------------------------------
// Class model (input)

struct Multiplicity {
  std::int64_t min = 0;
  std::optional<std::int64_t> max;  // nullopt: unbounded (`*`)

  static Multiplicity exactly(std::int64_t n) { return {n, n}; }
  static Multiplicity any() { return {0, std::nullopt}; }
  std::string to_string() const;
  friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
};

struct ClassDecl {
  Term name;
  bool is_abstract = false;
  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct AttributeDecl {
  Term owner;
  Term name;
  std::string datatype;  // string | integer | boolean | dateTime
  Multiplicity multiplicity{0, 1};
  std::optional<Term> default_value;
  friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

enum class AssociationKind { Plain, Aggregation, Composition };

struct AssociationDecl {
  Term name;
  Term source;
  Term target;
  AssociationKind kind = AssociationKind::Plain;
  Multiplicity source_multiplicity = Multiplicity::any();  // wholes/sources per target
  Multiplicity target_multiplicity = Multiplicity::any();  // targets per source
  bool ordered = false;
  bool unique = true;
  std::optional<Term> inverse;
  std::vector<std::string> notes;  // role comments, kept as annotations
  friend bool operator==(const AssociationDecl&, const AssociationDecl&) = default;
};

struct Generalization {
  Term sub;
  Term super;
  friend bool operator==(const Generalization&, const Generalization&) = default;
};

struct PartitionValue {
  std::string name;
  std::vector<PartitionValue> children;  // sub-partitions
  friend bool operator==(const PartitionValue&, const PartitionValue&) = default;
};

struct ValuePartition {
  Term partition_class;  // e.g. TreatmentPlanState
  Term owner;
  Term attribute;
  std::vector<PartitionValue> values;
  friend bool operator==(const ValuePartition&, const ValuePartition&) = default;
};

struct UmlClassModel {
  std::vector<ClassDecl> classes;
  std::vector<AttributeDecl> attributes;
  std::vector<AssociationDecl> associations;
  std::vector<Generalization> generalizations;
  std::vector<Generalization> association_generalizations;
  std::vector<ValuePartition> value_partitions;

  const ClassDecl* find_class(const Term& name) const;
  friend bool operator==(const UmlClassModel&, const UmlClassModel&) = default;
};

enum class ValuePartitionStrategy { DisjointIndividuals, DisjointSubclasses };
enum class PartWholeStrategy { PerAssociation, SingleHasPart };

struct TranslationOptions {
  ValuePartitionStrategy value_partition_strategy = ValuePartitionStrategy::DisjointIndividuals;
  PartWholeStrategy part_whole_strategy = PartWholeStrategy::PerAssociation;
  /// Ask for exactly-one cardinality on the shared part-whole property.
  bool part_whole_cardinality = false;
  friend bool operator==(const TranslationOptions&, const TranslationOptions&) = default;
};

// ---------------------------------------------------------------------------
// Semantic schema (output)

enum class Characteristic { Irreflexive, InverseFunctional, Functional, Transitive };

std::string_view characteristic_name(Characteristic c);

struct DatatypeProperty {
  Term name;
  Term domain;
  std::string range;  // datatype tag
  std::int64_t min = 0;
  std::optional<std::int64_t> max;
};

struct ObjectProperty {
  Term name;
  std::optional<Term> domain;
  std::optional<Term> range;
  std::optional<Term> inverse;
  std::set<Characteristic> characteristics;
  std::optional<std::int64_t> min;
  std::optional<std::int64_t> max;
  bool part_whole = false;           // whole -> part direction
  bool composition_inverse = false;  // part -> whole of a composition
  bool generated = false;
  std::vector<std::string> notes;

  bool has(Characteristic c) const { return characteristics.count(c) != 0; }
};

struct PropertyChain {
  std::vector<Term> steps;
  Term implies;
};

struct ValueDefault {
  Term owner;
  Term property;
  Term value;
};

/// Class-level universal restriction (SingleHasPart whole/part typing).
struct AllValuesFrom {
  Term owner;
  Term property;
  Term filler;
};

struct Enumeration {
  Term partition_class;
  std::vector<Term> individuals;
};

struct SchemaWarning {
  std::string code;
  std::string subject;
  std::string message;
};

struct SemanticSchema {
  std::set<Term> classes;
  std::set<Term> abstract_classes;
  std::vector<Generalization> subclass_of;
  std::vector<std::vector<Term>> disjoint_sets;
  std::map<Term, DatatypeProperty> datatype_properties;
  std::map<Term, ObjectProperty> object_properties;
  std::vector<Generalization> subproperty_of;
  std::vector<PropertyChain> chains;
  std::map<Term, Enumeration> enumerations;  // keyed by property
  std::map<Term, std::optional<std::int64_t>> ordered_properties;  // base -> max index
  std::vector<ValueDefault> defaults;
  std::vector<AllValuesFrom> restrictions;
  std::vector<SchemaWarning> warnings;

  bool has_class(const Term& c) const { return classes.count(c) != 0; }
  bool has_property(const Term& p) const;
  /// `c` plus every (transitive) superclass, sorted.
  std::set<Term> superclasses(const Term& c) const;
  bool is_subclass(const Term& sub, const Term& super) const;
  /// Classes with no subclass below `c` (including `c` when it is a leaf).
  std::vector<Term> concrete_subclasses(const Term& c) const;
  /// Range tag of a datatype property, "" for object properties/unknown.
  std::string datatype_range(const Term& p) const;
  /// For `<base>_<n>`: the base and n.
  std::optional<std::pair<Term, std::int64_t>> index_property(const Term& p) const;
  bool functional(const Term& p) const;
};

/// Throws UnknownDatatype / DuplicateProperty / EmptyPartition /
/// SubPartitionNotAllowed.
SemanticSchema translate(const UmlClassModel& model, const TranslationOptions& options = {});

SemanticSchema translate_value_partition(const ValuePartition& partition,
                                         ValuePartitionStrategy strategy);

/// p∘q ⊑ <prefix>:hasPart_generated for every whole->part->part path.
std::vector<PropertyChain> build_property_chains(const UmlClassModel& model,
                                                 const TranslationOptions& options = {});

/// Closes the store under subclass, subproperty, inverse, transitivity and
/// property chains. Returns the number of triples added.
std::size_t materialize(TripleStore& store, const SemanticSchema& schema);

/// Incremental closure seeded from `added` (already in the store).
std::size_t extend_closure(TripleStore& store, const SemanticSchema& schema,
                           std::span<const Triple> added);

/// True if a triple with this predicate can feed, or be produced by, a
/// derivation.
bool closure_relevant(const SemanticSchema& schema, const Term& predicate);

enum class StructuralKind {
  DomainRange,
  Cardinality,
  CompositionMultiOwner,
  PartWholeCycle,
  Disjointness,
  Enumeration,
  OrderIndex,
};

std::string_view structural_kind_name(StructuralKind k);
/// DOMAIN_RANGE, CARDINALITY, ...
std::string structural_kind_code(StructuralKind k);

struct StructuralViolation {
  StructuralKind kind;
  Term subject;
  std::string detail;
  std::vector<Triple> witnesses;
};

std::vector<StructuralViolation> check_structural(const TripleStore& store,
                                                  const SemanticSchema& schema);

/// Schema as triples in the documented axiom vocabulary.
TripleStore schema_to_store(const SemanticSchema& schema);

}  // namespace cwp

#endif  // CWP_SCHEMA_HPP
