#include "cwp/schema.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>

#include "cwp/error.hpp"

namespace cwp {

std::string Multiplicity::to_string() const {
  return std::to_string(min) + ".." + (max ? std::to_string(*max) : std::string("*"));
}

const ClassDecl* UmlClassModel::find_class(const Term& name) const {
  for (const ClassDecl& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string_view characteristic_name(Characteristic c) {
  switch (c) {
    case Characteristic::Irreflexive: return "Irreflexive";
    case Characteristic::InverseFunctional: return "InverseFunctional";
    case Characteristic::Functional: return "Functional";
    case Characteristic::Transitive: return "Transitive";
  }
  return "?";
}

std::string_view structural_kind_name(StructuralKind k) {
  switch (k) {
    case StructuralKind::DomainRange: return "DomainRange";
    case StructuralKind::Cardinality: return "Cardinality";
    case StructuralKind::CompositionMultiOwner: return "CompositionMultiOwner";
    case StructuralKind::PartWholeCycle: return "PartWholeCycle";
    case StructuralKind::Disjointness: return "Disjointness";
    case StructuralKind::Enumeration: return "Enumeration";
    case StructuralKind::OrderIndex: return "OrderIndex";
  }
  return "?";
}

std::string structural_kind_code(StructuralKind k) {
  std::string out;
  for (char c : structural_kind_name(k)) {
    if (std::isupper(static_cast<unsigned char>(c)) && !out.empty()) out += '_';
    out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SemanticSchema queries

bool SemanticSchema::has_property(const Term& p) const {
  return datatype_properties.count(p) || object_properties.count(p) || index_property(p).has_value();
}

std::set<Term> SemanticSchema::superclasses(const Term& c) const {
  std::set<Term> out{c};
  std::deque<Term> work{c};
  while (!work.empty()) {
    Term cur = work.front();
    work.pop_front();
    for (const Generalization& g : subclass_of) {
      if (g.sub == cur && out.insert(g.super).second) work.push_back(g.super);
    }
  }
  return out;
}

bool SemanticSchema::is_subclass(const Term& sub, const Term& super) const {
  return superclasses(sub).count(super) != 0;
}

std::vector<Term> SemanticSchema::concrete_subclasses(const Term& c) const {
  std::vector<Term> out;
  for (const Term& k : classes) {
    if (!is_subclass(k, c) || abstract_classes.count(k)) continue;
    const bool has_sub = std::any_of(subclass_of.begin(), subclass_of.end(),
                                     [&](const Generalization& g) { return g.super == k; });
    if (!has_sub) out.push_back(k);
  }
  return out;
}

std::string SemanticSchema::datatype_range(const Term& p) const {
  auto it = datatype_properties.find(p);
  return it == datatype_properties.end() ? std::string() : it->second.range;
}

std::optional<std::pair<Term, std::int64_t>> SemanticSchema::index_property(const Term& p) const {
  const std::string& text = p.lexical();
  const auto underscore = text.rfind('_');
  if (underscore == std::string::npos || underscore + 1 >= text.size()) return std::nullopt;
  std::int64_t n = 0;
  for (std::size_t i = underscore + 1; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    n = n * 10 + (text[i] - '0');
    if (n > 1000000) return std::nullopt;
  }
  if (n < 1) return std::nullopt;
  Term base = Term::name(text.substr(0, underscore));
  if (!ordered_properties.count(base)) return std::nullopt;
  return std::make_pair(base, n);
}

bool SemanticSchema::functional(const Term& p) const {
  if (auto it = datatype_properties.find(p); it != datatype_properties.end()) {
    return it->second.max && *it->second.max <= 1;
  }
  if (auto it = object_properties.find(p); it != object_properties.end()) {
    return it->second.has(Characteristic::Functional) || (it->second.max && *it->second.max <= 1);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Translation

namespace {

const std::set<std::string>& known_datatypes() {
  static const std::set<std::string> types{"string", "integer", "boolean", "dateTime"};
  return types;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

Term in_prefix(const Term& like, const std::string& local) {
  const std::string_view pfx = like.prefix();
  return Term::name(std::string(pfx) + ":" + local);
}

void add_object_property(SemanticSchema& s, ObjectProperty p) {
  if (s.object_properties.count(p.name) || s.datatype_properties.count(p.name)) {
    throw Error(ErrorCode::DuplicateProperty, "property " + p.name.text() + " is declared twice");
  }
  Term key = p.name;
  s.object_properties.emplace(std::move(key), std::move(p));
}

void merge(SemanticSchema& into, SemanticSchema&& from) {
  into.classes.insert(from.classes.begin(), from.classes.end());
  into.subclass_of.insert(into.subclass_of.end(), from.subclass_of.begin(), from.subclass_of.end());
  into.disjoint_sets.insert(into.disjoint_sets.end(), from.disjoint_sets.begin(), from.disjoint_sets.end());
  for (auto& [name, p] : from.object_properties) add_object_property(into, std::move(p));
  for (auto& [name, e] : from.enumerations) into.enumerations.emplace(name, std::move(e));
}

bool is_part_whole(const AssociationDecl& a) { return a.kind != AssociationKind::Plain; }

/// Sub-class test over the raw model generalizations.
bool model_is_subclass(const UmlClassModel& m, const Term& sub, const Term& super) {
  std::set<Term> seen{sub};
  std::deque<Term> work{sub};
  while (!work.empty()) {
    Term cur = work.front();
    work.pop_front();
    if (cur == super) return true;
    for (const Generalization& g : m.generalizations) {
      if (g.sub == cur && seen.insert(g.super).second) work.push_back(g.super);
    }
  }
  return false;
}

void add_partition_values(SemanticSchema& s, const Term& parent,
                          const std::vector<PartitionValue>& values) {
  std::vector<Term> siblings;
  for (const PartitionValue& v : values) {
    Term cls = in_prefix(parent, capitalize(v.name));
    s.classes.insert(cls);
    s.subclass_of.push_back({cls, parent});
    siblings.push_back(cls);
    if (!v.children.empty()) add_partition_values(s, cls, v.children);
  }
  if (siblings.size() >= 2) s.disjoint_sets.push_back(siblings);
}

void check_partition_names(const std::vector<PartitionValue>& values, std::set<std::string>& seen) {
  for (const PartitionValue& v : values) {
    if (!seen.insert(v.name).second) {
      throw Error(ErrorCode::SemanticError, "duplicate partition value " + v.name);
    }
    check_partition_names(v.children, seen);
  }
}

}  // namespace

SemanticSchema translate_value_partition(const ValuePartition& partition,
                                         ValuePartitionStrategy strategy) {
  if (partition.values.empty()) {
    throw Error(ErrorCode::EmptyPartition,
                "value partition " + partition.partition_class.text() + " has no values");
  }
  std::set<std::string> seen;
  check_partition_names(partition.values, seen);

  SemanticSchema s;
  s.classes.insert(partition.partition_class);
  ObjectProperty prop;
  prop.name = partition.attribute;
  prop.domain = partition.owner;
  prop.range = partition.partition_class;
  prop.max = 1;

  if (strategy == ValuePartitionStrategy::DisjointIndividuals) {
    Enumeration e{partition.partition_class, {}};
    for (const PartitionValue& v : partition.values) {
      if (!v.children.empty()) {
        throw Error(ErrorCode::SubPartitionNotAllowed,
                    "value " + v.name + " of " + partition.partition_class.text() +
                        " cannot be sub-partitioned when values are individuals");
      }
      e.individuals.push_back(in_prefix(partition.partition_class, v.name));
    }
    s.enumerations.emplace(partition.attribute, std::move(e));
  } else {
    add_partition_values(s, partition.partition_class, partition.values);
  }
  add_object_property(s, std::move(prop));
  return s;
}

std::vector<PropertyChain> build_property_chains(const UmlClassModel& model,
                                                 const TranslationOptions& options) {
  std::vector<PropertyChain> out;
  if (options.part_whole_strategy != PartWholeStrategy::PerAssociation) return out;
  for (const AssociationDecl& p : model.associations) {
    if (!is_part_whole(p)) continue;
    for (const AssociationDecl& q : model.associations) {
      if (!is_part_whole(q) || &p == &q) continue;
      if (model_is_subclass(model, p.target, q.source)) {
        out.push_back(PropertyChain{{p.name, q.name}, in_prefix(p.name, "hasPart_generated")});
      }
    }
  }
  return out;
}

SemanticSchema translate(const UmlClassModel& model, const TranslationOptions& options) {
  SemanticSchema s;
  for (const ClassDecl& c : model.classes) {
    s.classes.insert(c.name);
    if (c.is_abstract) s.abstract_classes.insert(c.name);
  }
  s.subclass_of = model.generalizations;

  for (const AttributeDecl& a : model.attributes) {
    if (!known_datatypes().count(a.datatype)) {
      throw Error(ErrorCode::UnknownDatatype,
                  "attribute " + a.name.text() + " has unknown datatype " + a.datatype);
    }
    if (s.datatype_properties.count(a.name) || s.object_properties.count(a.name)) {
      throw Error(ErrorCode::DuplicateProperty, "property " + a.name.text() + " is declared twice");
    }
    s.datatype_properties.emplace(
        a.name, DatatypeProperty{a.name, a.owner, a.datatype, a.multiplicity.min, a.multiplicity.max});
    if (a.default_value) s.defaults.push_back({a.owner, a.name, *a.default_value});
  }

  for (const ValuePartition& vp : model.value_partitions) {
    if (s.datatype_properties.count(vp.attribute)) {
      throw Error(ErrorCode::DuplicateProperty,
                  "property " + vp.attribute.text() + " is declared twice");
    }
    merge(s, translate_value_partition(vp, options.value_partition_strategy));
  }

  bool shared_part_whole_done = false;
  for (const AssociationDecl& a : model.associations) {
    if (is_part_whole(a) && options.part_whole_strategy == PartWholeStrategy::SingleHasPart) {
      const Term has_part = in_prefix(a.name, "hasPart");
      const Term part_of = in_prefix(a.name, "partOf");
      if (!shared_part_whole_done) {
        ObjectProperty hp;
        hp.name = has_part;
        hp.inverse = part_of;
        hp.part_whole = true;
        hp.generated = true;
        ObjectProperty po;
        po.name = part_of;
        po.inverse = has_part;
        po.characteristics.insert(Characteristic::Transitive);
        po.generated = true;
        add_object_property(s, std::move(hp));
        add_object_property(s, std::move(po));
        if (options.part_whole_cardinality) {
          s.warnings.push_back(
              {"TRANSITIVE_CARDINALITY_CONFLICT", part_of.text(),
               "cardinality requested on transitive " + part_of.text() +
                   "; transitive properties cannot carry cardinality restrictions, none emitted"});
        }
        shared_part_whole_done = true;
      }
      s.restrictions.push_back({a.source, has_part, a.target});
      s.restrictions.push_back({a.target, part_of, a.source});
      continue;
    }

    const Term inverse = a.inverse ? *a.inverse : in_prefix(a.name, a.name.local_name().data() + std::string("_inv"));
    ObjectProperty fwd;
    fwd.name = a.name;
    fwd.domain = a.source;
    fwd.range = a.target;
    fwd.inverse = inverse;
    fwd.notes = a.notes;
    ObjectProperty inv;
    inv.name = inverse;
    inv.domain = a.target;
    inv.range = a.source;
    inv.inverse = a.name;
    inv.generated = !a.inverse.has_value();
    if (a.unique) {
      if (a.target_multiplicity.min > 0) fwd.min = a.target_multiplicity.min;
      fwd.max = a.target_multiplicity.max;
      if (a.source_multiplicity.min > 0) inv.min = a.source_multiplicity.min;
      inv.max = a.source_multiplicity.max;
    }
    if (is_part_whole(a)) {
      fwd.part_whole = true;
      fwd.characteristics.insert(Characteristic::Irreflexive);
      fwd.characteristics.insert(Characteristic::InverseFunctional);
      inv.max = 1;
      if (a.kind == AssociationKind::Composition) {
        inv.min = 1;
        inv.composition_inverse = true;
      }
    }
    if (a.ordered) s.ordered_properties[a.name] = a.target_multiplicity.max;
    add_object_property(s, std::move(fwd));
    add_object_property(s, std::move(inv));
  }
  s.subproperty_of = model.association_generalizations;

  s.chains = build_property_chains(model, options);
  if (!s.chains.empty()) {
    ObjectProperty derived;
    derived.name = s.chains.front().implies;
    derived.part_whole = true;
    derived.generated = true;
    add_object_property(s, std::move(derived));
  }

  for (auto& [name, p] : s.object_properties) {
    if (p.has(Characteristic::Transitive) && (p.min || p.max)) {
      s.warnings.push_back({"TRANSITIVE_CARDINALITY_CONFLICT", name.text(),
                            "transitive property " + name.text() + " cannot carry cardinality; dropped"});
      p.min.reset();
      p.max.reset();
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Materialization

namespace {

struct ClosureIndex {
  std::map<Term, std::vector<Term>> super_classes;  // strict, transitive
  std::map<Term, std::vector<Term>> super_props;
  std::map<Term, Term> inverse;
  std::set<Term> transitive;
  std::map<Term, std::vector<std::pair<Term, Term>>> chain_first;   // p -> (q, r)
  std::map<Term, std::vector<std::pair<Term, Term>>> chain_second;  // q -> (p, r)
  std::set<Term> targets;  // predicates the closure can produce
  const SemanticSchema* schema = nullptr;

  explicit ClosureIndex(const SemanticSchema& s) : schema(&s) {
    for (const Term& c : s.classes) {
      auto sup = s.superclasses(c);
      sup.erase(c);
      if (!sup.empty()) super_classes[c] = {sup.begin(), sup.end()};
    }
    std::set<Term> props;
    for (const Generalization& g : s.subproperty_of) props.insert(g.sub);
    for (const Term& p : props) {
      std::set<Term> seen{p};
      std::deque<Term> work{p};
      while (!work.empty()) {
        Term cur = work.front();
        work.pop_front();
        for (const Generalization& g : s.subproperty_of) {
          if (g.sub == cur && seen.insert(g.super).second) work.push_back(g.super);
        }
      }
      seen.erase(p);
      targets.insert(seen.begin(), seen.end());
      super_props[p] = {seen.begin(), seen.end()};
    }
    for (const auto& [name, p] : s.object_properties) {
      if (p.inverse) {
        inverse[name] = *p.inverse;
        inverse[*p.inverse] = name;
      }
      if (p.has(Characteristic::Transitive)) transitive.insert(name);
    }
    for (const PropertyChain& c : s.chains) {
      if (c.steps.size() != 2) continue;
      chain_first[c.steps[0]].push_back({c.steps[1], c.implies});
      chain_second[c.steps[1]].push_back({c.steps[0], c.implies});
      targets.insert(c.implies);
    }
    for (const auto& kv : s.ordered_properties) targets.insert(kv.first);
  }

  bool relevant(const Term& p) const {
    return p == rdf_type() || super_props.count(p) || inverse.count(p) || transitive.count(p) ||
           chain_first.count(p) || chain_second.count(p) || schema->index_property(p).has_value();
  }
};

}  // namespace

bool closure_relevant(const SemanticSchema& schema, const Term& predicate) {
  const ClosureIndex idx(schema);
  return idx.relevant(predicate) || idx.targets.count(predicate) != 0;
}

std::size_t extend_closure(TripleStore& store, const SemanticSchema& schema,
                           std::span<const Triple> added) {
  const ClosureIndex idx(schema);
  std::deque<Triple> work(added.begin(), added.end());
  std::size_t count = 0;
  auto emit = [&](Triple t) {
    if (store.add(t)) {
      ++count;
      work.push_back(std::move(t));
    }
  };
  while (!work.empty()) {
    const Triple t = work.front();
    work.pop_front();
    if (!idx.relevant(t.predicate)) continue;
    const Term& s = t.subject;
    const Term& p = t.predicate;
    const Term& o = t.object;
    if (p == rdf_type()) {
      if (auto it = idx.super_classes.find(o); it != idx.super_classes.end()) {
        for (const Term& d : it->second) emit({s, p, d});
      }
      continue;
    }
    if (auto it = idx.super_props.find(p); it != idx.super_props.end()) {
      for (const Term& q : it->second) emit({s, q, o});
    }
    if (auto ip = schema.index_property(p)) emit({s, ip->first, o});
    if (!o.is_name()) continue;
    if (auto it = idx.inverse.find(p); it != idx.inverse.end()) emit({o, it->second, s});
    if (idx.transitive.count(p)) {
      for (const Term& z : store.objects(o, p)) emit({s, p, z});
      for (const Term& x : store.subjects(p, s)) emit({x, p, o});
    }
    if (auto it = idx.chain_first.find(p); it != idx.chain_first.end()) {
      for (const auto& [q, r] : it->second) {
        for (const Term& z : store.objects(o, q)) emit({s, r, z});
      }
    }
    if (auto it = idx.chain_second.find(p); it != idx.chain_second.end()) {
      for (const auto& [first, r] : it->second) {
        for (const Term& x : store.subjects(first, s)) emit({x, r, o});
      }
    }
  }
  return count;
}

std::size_t materialize(TripleStore& store, const SemanticSchema& schema) {
  std::vector<Triple> all(store.begin(), store.end());
  return extend_closure(store, schema, all);
}

// ---------------------------------------------------------------------------
// Structural checks

namespace {

Triple type_triple(const Term& s, const Term& c) { return {s, rdf_type(), c}; }

void check_domain_range(const TripleStore& store, const SemanticSchema& schema,
                        std::vector<StructuralViolation>& out) {
  for (const Triple& t : store) {
    if (t.predicate == rdf_type()) {
      if (t.object.is_name() && !schema.has_class(t.object)) {
        out.push_back({StructuralKind::DomainRange, t.subject,
                       "typed with undeclared class " + t.object.text(), {t}});
      }
      continue;
    }
    if (auto it = schema.datatype_properties.find(t.predicate); it != schema.datatype_properties.end()) {
      const DatatypeProperty& dp = it->second;
      if (!store.has_type(t.subject, dp.domain)) {
        out.push_back({StructuralKind::DomainRange, t.subject,
                       t.predicate.text() + " used outside its domain " + dp.domain.text(), {t}});
      }
      if (t.object.is_name() || term_kind_name(t.object.kind()) != dp.range) {
        out.push_back({StructuralKind::DomainRange, t.subject,
                       t.predicate.text() + " value " + t.object.text() + " is not of type " + dp.range, {t}});
      }
      continue;
    }
    Term prop = t.predicate;
    if (auto ip = schema.index_property(prop)) prop = ip->first;
    auto it = schema.object_properties.find(prop);
    if (it == schema.object_properties.end()) {
      out.push_back({StructuralKind::DomainRange, t.subject,
                     "undeclared property " + t.predicate.text(), {t}});
      continue;
    }
    const ObjectProperty& op = it->second;
    if (op.domain && !store.has_type(t.subject, *op.domain)) {
      out.push_back({StructuralKind::DomainRange, t.subject,
                     t.predicate.text() + " used outside its domain " + op.domain->text(), {t}});
    }
    if (!t.object.is_name()) {
      out.push_back({StructuralKind::DomainRange, t.subject,
                     t.predicate.text() + " expects an individual, got " + t.object.text(), {t}});
    } else if (op.range && !schema.enumerations.count(prop) && !store.has_type(t.object, *op.range)) {
      out.push_back({StructuralKind::DomainRange, t.subject,
                     t.predicate.text() + " target " + t.object.text() + " is not an instance of " + op.range->text(),
                     {t}});
    }
  }
}

void check_counts(const TripleStore& store, const Term& prop, const Term* domain, std::int64_t min,
                  std::optional<std::int64_t> max, StructuralKind kind, const std::string& what,
                  std::vector<StructuralViolation>& out) {
  std::set<Term> subjects;
  if (domain != nullptr && min > 0) {
    for (const Term& s : store.instances_of(*domain)) subjects.insert(s);
  }
  store.for_each_match(nullptr, &prop, nullptr, [&](const Triple& t) { subjects.insert(t.subject); });
  for (const Term& s : subjects) {
    std::vector<Triple> uses = store.find(&s, &prop, nullptr);
    const auto n = static_cast<std::int64_t>(uses.size());
    if (n >= min && (!max || n <= *max)) continue;
    if (uses.empty() && domain != nullptr) uses.push_back(type_triple(s, *domain));
    out.push_back({kind, s,
                   what + " " + prop.text() + " has " + std::to_string(n) + " value(s), expected " +
                       Multiplicity{min, max}.to_string(),
                   std::move(uses)});
  }
}

void check_part_whole_cycles(const TripleStore& store, const SemanticSchema& schema,
                             std::vector<StructuralViolation>& out) {
  std::map<Term, std::vector<Triple>> edges;
  for (const auto& [name, p] : schema.object_properties) {
    if (!p.part_whole) continue;
    store.for_each_match(nullptr, &name, nullptr, [&](const Triple& t) {
      if (t.object.is_name()) edges[t.subject].push_back(t);
    });
  }
  // Tarjan's SCC over the whole->part graph.
  std::map<Term, int> index, low;
  std::set<Term> on_stack;
  std::vector<Term> stack;
  int counter = 0;
  std::function<void(const Term&)> strong = [&](const Term& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const Triple& e : edges[v]) {
      const Term& w = e.object;
      if (!index.count(w)) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] != index[v]) return;
    std::vector<Term> component;
    Term w;
    do {
      w = stack.back();
      stack.pop_back();
      on_stack.erase(w);
      component.push_back(w);
    } while (!(w == v));
    std::set<Term> members(component.begin(), component.end());
    for (const Term& m : members) {
      const auto& out_edges = edges[m];
      auto inside = std::find_if(out_edges.begin(), out_edges.end(),
                                 [&](const Triple& e) { return members.count(e.object) != 0; });
      if (inside == out_edges.end()) continue;  // singleton without self-loop
      out.push_back({StructuralKind::PartWholeCycle, m,
                     m.text() + " is (transitively) part of itself via " + inside->predicate.text(),
                     {*inside}});
    }
  };
  std::vector<Term> nodes;
  for (const auto& kv : edges) nodes.push_back(kv.first);
  for (const Term& n : nodes) {
    if (!index.count(n)) strong(n);
  }
}

void check_order_index(const TripleStore& store, const SemanticSchema& schema,
                       std::vector<StructuralViolation>& out) {
  if (schema.ordered_properties.empty()) return;
  // base -> subject -> (index, triple)
  std::map<Term, std::map<Term, std::vector<std::pair<std::int64_t, Triple>>>> uses;
  for (const Triple& t : store) {
    if (auto ip = schema.index_property(t.predicate)) uses[ip->first][t.subject].push_back({ip->second, t});
  }
  for (auto& [base, by_subject] : uses) {
    for (auto& [subject, entries] : by_subject) {
      std::map<std::int64_t, std::vector<Triple>> by_index;
      std::map<Term, std::vector<Triple>> by_object;
      for (const auto& [n, t] : entries) {
        by_index[n].push_back(t);
        by_object[t.object].push_back(t);
      }
      std::vector<std::string> problems;
      std::vector<Triple> witnesses;
      for (const auto& [n, ts] : by_index) {
        if (ts.size() > 1) {
          problems.push_back("index " + std::to_string(n) + " used " + std::to_string(ts.size()) + " times");
          witnesses.insert(witnesses.end(), ts.begin(), ts.end());
        }
      }
      for (const auto& [o, ts] : by_object) {
        if (ts.size() > 1) {
          problems.push_back(o.text() + " appears at " + std::to_string(ts.size()) + " positions");
          witnesses.insert(witnesses.end(), ts.begin(), ts.end());
        }
      }
      std::int64_t expected = 1;
      for (const auto& [n, ts] : by_index) {
        if (n != expected) {
          problems.push_back("gap before index " + std::to_string(n));
          witnesses.push_back(ts.front());
          break;
        }
        ++expected;
      }
      if (auto mx = schema.ordered_properties.at(base); mx && static_cast<std::int64_t>(by_index.size()) > *mx) {
        problems.push_back("more than " + std::to_string(*mx) + " positions");
      }
      if (problems.empty()) continue;
      std::string detail = "ordered " + base.text() + ":";
      for (const auto& p : problems) detail += " " + p + ";";
      detail.pop_back();
      if (witnesses.empty()) witnesses.push_back(entries.front().second);
      out.push_back({StructuralKind::OrderIndex, subject, detail, witnesses});
    }
  }
}

}  // namespace

std::vector<StructuralViolation> check_structural(const TripleStore& store,
                                                  const SemanticSchema& schema) {
  std::vector<StructuralViolation> out;
  check_domain_range(store, schema, out);

  for (const auto& [name, dp] : schema.datatype_properties) {
    if (dp.min > 0 || dp.max) {
      check_counts(store, name, &dp.domain, dp.min, dp.max, StructuralKind::Cardinality, "property", out);
    }
  }
  for (const auto& [name, op] : schema.object_properties) {
    if (op.composition_inverse) {
      // Exactly one whole per part, for every instance of the part class.
      check_counts(store, name, op.domain ? &*op.domain : nullptr, 1, 1,
                   StructuralKind::CompositionMultiOwner, "composition owner via", out);
      continue;
    }
    if (op.has(Characteristic::Transitive)) continue;
    if (op.min || op.max) {
      check_counts(store, name, op.domain ? &*op.domain : nullptr, op.min.value_or(0), op.max,
                   StructuralKind::Cardinality, "property", out);
    }
  }

  check_part_whole_cycles(store, schema, out);

  for (const auto& set : schema.disjoint_sets) {
    std::map<Term, std::vector<Term>> typed;
    for (const Term& c : set) {
      for (const Term& s : store.instances_of(c)) typed[s].push_back(c);
    }
    for (const auto& [s, classes] : typed) {
      if (classes.size() < 2) continue;
      std::string detail = "typed in disjoint classes";
      std::vector<Triple> witnesses;
      for (const Term& c : classes) {
        detail += " " + c.text();
        witnesses.push_back(type_triple(s, c));
      }
      out.push_back({StructuralKind::Disjointness, s, detail, witnesses});
    }
  }

  for (const auto& [prop, e] : schema.enumerations) {
    store.for_each_match(nullptr, &prop, nullptr, [&](const Triple& t) {
      if (std::find(e.individuals.begin(), e.individuals.end(), t.object) == e.individuals.end()) {
        out.push_back({StructuralKind::Enumeration, t.subject,
                       t.object.text() + " is not one of the " + e.partition_class.text() + " values",
                       {t}});
      }
    });
  }

  check_order_index(store, schema, out);

  std::stable_sort(out.begin(), out.end(), [](const StructuralViolation& a, const StructuralViolation& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (!(a.subject == b.subject)) return a.subject < b.subject;
    return a.detail < b.detail;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Export

TripleStore schema_to_store(const SemanticSchema& s) {
  TripleStore out;
  const Term type = rdf_type();
  auto n = [](const std::string& q) { return Term::name(q); };
  auto add = [&](const Term& a, const Term& p, const Term& b) { out.add({a, p, b}); };
  auto add_cards = [&](const Term& p, std::optional<std::int64_t> min, std::optional<std::int64_t> max) {
    if (min && max && *min == *max) {
      add(p, n("owl:cardinality"), Term::integer(*min));
      return;
    }
    if (min && *min > 0) add(p, n("owl:minCardinality"), Term::integer(*min));
    if (max) add(p, n("owl:maxCardinality"), Term::integer(*max));
  };
  auto local = [](const Term& t) { return std::string(t.local_name()); };

  for (const Term& c : s.classes) add(c, type, n("owl:Class"));
  for (const Term& c : s.abstract_classes) add(c, type, n("cwp:AbstractClass"));
  for (const Generalization& g : s.subclass_of) add(g.sub, n("rdfs:subClassOf"), g.super);
  for (const auto& set : s.disjoint_sets) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t j = i + 1; j < set.size(); ++j) add(set[i], n("owl:disjointWith"), set[j]);
    }
  }
  for (const auto& [name, dp] : s.datatype_properties) {
    add(name, type, n("owl:DatatypeProperty"));
    add(name, n("rdfs:domain"), dp.domain);
    add(name, n("rdfs:range"), n("xsd:" + dp.range));
    add_cards(name, dp.min, dp.max);
  }
  for (const auto& [name, op] : s.object_properties) {
    add(name, type, n("owl:ObjectProperty"));
    if (op.domain) add(name, n("rdfs:domain"), *op.domain);
    if (op.range) add(name, n("rdfs:range"), *op.range);
    if (op.inverse) add(name, n("owl:inverseOf"), *op.inverse);
    for (Characteristic c : op.characteristics) {
      add(name, type, n("owl:" + std::string(characteristic_name(c)) + "Property"));
    }
    if (op.part_whole) add(name, type, n("cwp:PartWholeProperty"));
    if (op.composition_inverse) add(name, type, n("cwp:CompositionInverse"));
    add_cards(name, op.min, op.max);
    for (const std::string& note : op.notes) add(name, n("rdfs:comment"), Term::string(note));
  }
  for (const Generalization& g : s.subproperty_of) add(g.sub, n("rdfs:subPropertyOf"), g.super);
  for (const PropertyChain& c : s.chains) {
    std::string id = "cwp:chain";
    for (const Term& step : c.steps) id += "_" + local(step);
    const Term node = n(id);
    add(node, type, n("owl:PropertyChainAxiom"));
    add(node, n("cwp:implies"), c.implies);
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
      add(node, n("cwp:step" + std::to_string(i + 1)), c.steps[i]);
    }
  }
  for (const auto& [prop, e] : s.enumerations) {
    add(prop, n("cwp:enumeratedBy"), e.partition_class);
    for (const Term& ind : e.individuals) {
      add(e.partition_class, n("owl:oneOf"), ind);
      add(ind, type, e.partition_class);
    }
    for (std::size_t i = 0; i < e.individuals.size(); ++i) {
      for (std::size_t j = i + 1; j < e.individuals.size(); ++j) {
        add(e.individuals[i], n("owl:differentFrom"), e.individuals[j]);
      }
    }
  }
  for (const auto& [base, mx] : s.ordered_properties) {
    add(base, type, n("cwp:OrderedProperty"));
    if (mx) add(base, n("cwp:maxIndex"), Term::integer(*mx));
  }
  for (const ValueDefault& d : s.defaults) {
    const Term node = n("cwp:default_" + local(d.owner) + "_" + local(d.property));
    add(node, type, n("owl:Restriction"));
    add(node, n("cwp:onClass"), d.owner);
    add(node, n("owl:onProperty"), d.property);
    add(node, n("owl:hasValue"), d.value);
  }
  for (const AllValuesFrom& r : s.restrictions) {
    const Term node = n("cwp:restriction_" + local(r.owner) + "_" + local(r.property) + "_" + local(r.filler));
    add(node, type, n("owl:Restriction"));
    add(node, n("cwp:onClass"), r.owner);
    add(node, n("owl:onProperty"), r.property);
    add(node, n("owl:allValuesFrom"), r.filler);
  }
  return out;
}

}  // namespace cwp
