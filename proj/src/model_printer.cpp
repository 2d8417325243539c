#include <sstream>

#include "cwp/model.hpp"

namespace cwp {

namespace {

std::string mult(const Multiplicity& m) { return "[" + m.to_string() + "]"; }

std::string term_text(const Term& t) {
  if (t == rdf_type()) return "a";
  if (t.is_variable()) return "?" + t.lexical();
  return t.text();
}

void print_triples(std::ostream& out, const std::vector<TriplePattern>& triples, const std::string& indent) {
  for (const TriplePattern& tp : triples) {
    out << indent << term_text(tp.subject) << ' ' << term_text(tp.predicate) << ' ' << term_text(tp.object)
        << " .\n";
  }
}

void print_group(std::ostream& out, const GraphPattern& p, const std::string& indent) {
  out << "{\n";
  const std::string inner = indent + "  ";
  print_triples(out, p.triples, inner);
  for (const PatternGroup& g : p.groups) {
    out << inner << (g.negated ? "NOT EXISTS " : "EXISTS ");
    print_group(out, g.body, inner);
    out << " .\n";
  }
  for (const FilterExpr& f : p.filters) out << inner << "FILTER (" << f.to_string() << ") .\n";
  out << indent << "}";
}

void print_template(std::ostream& out, const ConstructTemplate& t) {
  out << "{\n";
  print_triples(out, t.triples, "  ");
  out << "}";
}

void print_partition_values(std::ostream& out, const std::vector<PartitionValue>& values) {
  out << "{";
  for (const PartitionValue& v : values) {
    out << ' ' << v.name;
    if (!v.children.empty()) {
      out << ' ';
      print_partition_values(out, v.children);
    }
  }
  out << " }";
}

void print_strings(std::ostream& out, const std::vector<std::string>& items) {
  for (const std::string& s : items) out << " \"" << escape_string(s) << '"';
}

}  // namespace

std::string print_model(const WorkModel& m) {
  std::ostringstream out;
  for (const PrefixDecl& p : m.prefixes) out << "prefix " << p.prefix << ": <" << p.iri << "> ;\n";
  if (!m.default_prefix.empty()) out << "default " << m.default_prefix << " ;\n";
  out << "\noptions {\n"
      << "  value-partition = "
      << (m.options.value_partition_strategy == ValuePartitionStrategy::DisjointIndividuals
              ? "disjoint-individuals"
              : "disjoint-subclasses")
      << " ;\n  part-whole = "
      << (m.options.part_whole_strategy == PartWholeStrategy::PerAssociation ? "per-association"
                                                                             : "single-haspart")
      << " ;\n  part-cardinality = " << (m.options.part_whole_cardinality ? "true" : "false") << " ;\n}\n";

  const UmlClassModel& cm = m.classes;
  if (!cm.classes.empty()) out << '\n';
  for (const ClassDecl& c : cm.classes) {
    out << (c.is_abstract ? "abstract class " : "class ") << c.name.text();
    bool first = true;
    for (const Generalization& g : cm.generalizations) {
      if (!(g.sub == c.name)) continue;
      out << (first ? " : " : ", ") << g.super.text();
      first = false;
    }
    out << " {\n";
    for (const AttributeDecl& a : cm.attributes) {
      if (!(a.owner == c.name)) continue;
      out << "  attribute " << a.name.text() << " : " << a.datatype << ' ' << mult(a.multiplicity);
      if (a.default_value) out << " = " << a.default_value->text();
      out << " ;\n";
    }
    out << "}\n";
  }
  if (!cm.associations.empty()) out << '\n';
  for (const AssociationDecl& a : cm.associations) {
    out << "association " << a.name.text() << " : ";
    if (a.kind == AssociationKind::Composition) out << "composition ";
    if (a.kind == AssociationKind::Aggregation) out << "aggregation ";
    out << a.source.text() << ' ' << mult(a.source_multiplicity) << " -> " << a.target.text() << ' '
        << mult(a.target_multiplicity);
    if (a.inverse) out << " inverse " << a.inverse->text();
    if (a.ordered) out << " ordered";
    if (!a.unique) out << " nonunique";
    for (const std::string& n : a.notes) out << " note \"" << escape_string(n) << '"';
    out << " ;\n";
  }
  for (const Generalization& g : cm.association_generalizations) {
    out << "subproperty " << g.sub.text() << " : " << g.super.text() << " ;\n";
  }
  for (const ValuePartition& p : cm.value_partitions) {
    out << "\npartition " << p.partition_class.text() << " on " << p.owner.text() << '.' << p.attribute.text()
        << ' ';
    print_partition_values(out, p.values);
    out << '\n';
  }

  for (const AskConstraint& c : m.constraints) {
    out << "\nconstraint " << c.id << " on " << c.attached_class.text() << " \"" << escape_string(c.message)
        << "\"\nASK WHERE ";
    print_group(out, c.body, "");
    out << '\n';
  }
  for (const Constructor& c : m.constructors) {
    out << "\nconstructor on " << c.attached_class.text() << "\nCONSTRUCT ";
    print_template(out, c.tmpl);
    out << "\nWHERE ";
    print_group(out, c.where, "");
    out << '\n';
  }
  for (const TransitionRule& r : m.rules) {
    out << "\nrule " << r.id;
    if (!r.attached_class.text().empty()) out << " on " << r.attached_class.text();
    if (!r.del.triples.empty()) {
      out << "\nDELETE ";
      print_template(out, r.del);
    }
    if (!r.ins.triples.empty()) {
      out << "\nINSERT ";
      print_template(out, r.ins);
    }
    out << "\nWHERE ";
    print_group(out, r.where, "");
    out << '\n';
  }

  for (const StateMachineDecl& d : m.machines) {
    out << "\nmachine " << d.name << " on " << d.subject_class.text() << '.' << d.state_property.text();
    if (!d.variants.empty()) {
      out << " variants";
      for (const Term& v : d.variants) out << ' ' << v.text();
    }
    out << " {\n  states";
    print_strings(out, d.states);
    out << " ;\n  initial \"" << escape_string(d.initial) << "\" ;\n";
    if (!d.finals.empty()) {
      out << "  final";
      print_strings(out, {d.finals.begin(), d.finals.end()});
      out << " ;\n";
    }
    for (const auto& [type, states] : d.excludes) {
      out << "  exclude " << type.text();
      print_strings(out, states);
      out << " ;\n";
    }
    for (const DeclaredTransition& t : d.transitions) {
      out << "  transition " << t.id << " \"" << escape_string(t.source) << "\" -> \"" << escape_string(t.target)
          << '"';
      if (!t.types.empty()) {
        out << " for";
        for (const Term& ty : t.types) out << ' ' << ty.text();
      }
      out << " ;\n";
    }
    out << "}\n";
  }

  if (!m.mutability.kinds.empty()) {
    out << "\nmutability {\n";
    for (const auto& [prop, kind] : m.mutability.kinds) {
      out << "  " << mutability_name(kind) << ' ' << prop.text();
      if (auto it = m.mutability.domains.find(prop); it != m.mutability.domains.end()) {
        out << " {";
        for (const DomainValue& v : it->second) out << ' ' << v.to_string();
        out << " }";
      }
      out << " ;\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace cwp
