#include <charconv>
#include <functional>

#include "cwp/model.hpp"
#include "cwp/scenario.hpp"
#include "lexer.hpp"

namespace cwp {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

bool WorkModel::has_prefix(std::string_view p) const {
  if (p == "rdf" || p == "xsd") return true;
  for (const PrefixDecl& d : prefixes) {
    if (d.prefix == p) return true;
  }
  return false;
}

Term resolve_name(const WorkModel& model, std::string_view text) {
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    if (!model.has_prefix(text.substr(0, colon))) {
      throw Error(ErrorCode::SemanticError, "undeclared prefix in " + std::string(text));
    }
    return Term::name(std::string(text));
  }
  if (model.default_prefix.empty()) {
    throw Error(ErrorCode::SemanticError, "name " + std::string(text) + " has no prefix and no default is declared");
  }
  return Term::name(model.default_prefix + ":" + std::string(text));
}

namespace {

enum class Position { Subject, Predicate, Object, Operand };

/// Shared term and pattern syntax.
class Reader {
 public:
  Reader(std::string_view text, std::function<Term(const Token&)> resolve)
      : ts_(detail::tokenize(text)), resolve_(std::move(resolve)) {}

  TokenStream& ts() { return ts_; }

  Term name() {
    const Token& t = ts_.expect(Tok::Ident, "a name");
    return resolve_(t);
  }

  std::string word(std::string_view what) { return ts_.expect(Tok::Ident, what).text; }

  std::string string_literal(std::string_view what) { return ts_.expect(Tok::String, what).text; }

  Term term(Position pos) {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Tok::Variable:
        return Term::variable(ts_.next().text);
      case Tok::Ident: {
        if (pos == Position::Predicate && t.text == "a") {
          ts_.next();
          return rdf_type();
        }
        if ((pos == Position::Object || pos == Position::Operand) && (t.text == "true" || t.text == "false")) {
          ts_.next();
          return Term::boolean(t.text == "true");
        }
        return name();
      }
      case Tok::String: {
        if (pos == Position::Subject || pos == Position::Predicate) break;
        const Token s = ts_.next();
        if (ts_.accept_punct("^^")) {
          const Token& dt = ts_.expect(Tok::Ident, "a datatype");
          if (dt.text != "dateTime" && dt.text != "xsd:dateTime") ts_.fail(dt, "unsupported datatype " + dt.text);
          return datetime(s);
        }
        return Term::string(s.text);
      }
      case Tok::DateTime: {
        if (pos == Position::Subject || pos == Position::Predicate) break;
        return datetime(ts_.next());
      }
      case Tok::Integer: {
        if (pos == Position::Subject || pos == Position::Predicate) break;
        const Token n = ts_.next();
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
        if (ec != std::errc() || ptr != n.text.data() + n.text.size()) {
          ts_.fail(n, "integer " + n.text + " is out of range");
        }
        return Term::integer(v);
      }
      default:
        break;
    }
    ts_.fail("unexpected " + detail::describe(t));
  }

  Term datetime(const Token& t) {
    auto dt = DateTime::parse(t.text);
    if (!dt) ts_.fail(t, "invalid dateTime \"" + t.text + "\"");
    return Term::datetime(*dt);
  }

  TriplePattern triple() {
    TriplePattern tp;
    tp.subject = term(Position::Subject);
    tp.predicate = term(Position::Predicate);
    tp.object = term(Position::Object);
    ts_.accept_punct(".");
    return tp;
  }

  GraphPattern group() {
    ts_.expect_punct("{");
    GraphPattern p;
    while (!ts_.accept_punct("}")) {
      if (ts_.at_end()) ts_.fail("expected '}' to close the pattern");
      if (ts_.accept_word("FILTER")) {
        ts_.expect_punct("(");
        p.filters.push_back(expr());
        ts_.expect_punct(")");
        ts_.accept_punct(".");
      } else if (ts_.is_word("NOT") && ts_.peek(1).kind == Tok::Ident && ts_.peek(1).text == "EXISTS") {
        ts_.next();
        ts_.next();
        p.groups.push_back({true, group()});
        ts_.accept_punct(".");
      } else if (ts_.accept_word("EXISTS")) {
        p.groups.push_back({false, group()});
        ts_.accept_punct(".");
      } else {
        p.triples.push_back(triple());
      }
    }
    return p;
  }

  ConstructTemplate tmpl() {
    ts_.expect_punct("{");
    ConstructTemplate t;
    while (!ts_.accept_punct("}")) {
      if (ts_.at_end()) ts_.fail("expected '}' to close the template");
      t.triples.push_back(triple());
    }
    return t;
  }

  FilterExpr expr() {
    FilterExpr lhs = conj();
    while (ts_.accept_punct("||")) lhs = FilterExpr::binary(FilterOp::Or, std::move(lhs), conj());
    return lhs;
  }

  FilterExpr conj() {
    FilterExpr lhs = unary();
    while (ts_.accept_punct("&&")) lhs = FilterExpr::binary(FilterOp::And, std::move(lhs), unary());
    return lhs;
  }

  FilterExpr unary() {
    if (ts_.accept_punct("!")) return FilterExpr::negate(unary());
    FilterExpr lhs = primary();
    static const std::pair<const char*, FilterOp> ops[] = {
        {"=", FilterOp::Eq}, {"!=", FilterOp::Ne}, {"<", FilterOp::Lt},
        {">", FilterOp::Gt}, {"<=", FilterOp::Le}, {">=", FilterOp::Ge}};
    for (const auto& [sym, op] : ops) {
      if (ts_.accept_punct(sym)) return FilterExpr::binary(op, std::move(lhs), primary());
    }
    return lhs;
  }

  FilterExpr primary() {
    if (ts_.accept_punct("(")) {
      FilterExpr e = expr();
      ts_.expect_punct(")");
      return e;
    }
    if (ts_.is_word("now") && ts_.peek(1).kind == Tok::Punct && ts_.peek(1).text == "(") {
      ts_.next();
      ts_.next();
      ts_.expect_punct(")");
      return FilterExpr::now();
    }
    return FilterExpr::term(term(Position::Operand));
  }

  Multiplicity multiplicity() {
    ts_.expect_punct("[");
    Multiplicity m;
    if (ts_.accept_punct("*")) {
      ts_.expect_punct("]");
      return Multiplicity::any();
    }
    m.min = bound();
    if (ts_.accept_punct("..")) {
      if (!ts_.accept_punct("*")) m.max = bound();
    } else {
      m.max = m.min;
    }
    ts_.expect_punct("]");
    if (m.max && *m.max < m.min) ts_.fail("multiplicity upper bound is below its lower bound");
    return m;
  }

  std::int64_t bound() {
    const Token& t = ts_.expect(Tok::Integer, "a multiplicity bound");
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || v < 0) ts_.fail(t, "invalid multiplicity bound " + t.text);
    return v;
  }

 private:
  TokenStream ts_;
  std::function<Term(const Token&)> resolve_;
};

class ModelParser {
 public:
  explicit ModelParser(std::string_view text)
      : r_(text, [this](const Token& t) { return resolve(t); }) {}

  WorkModel run() {
    TokenStream& ts = r_.ts();
    while (!ts.at_end()) {
      const Token start = ts.peek();
      if (ts.accept_word("prefix")) {
        prefix();
      } else if (ts.accept_word("default")) {
        m_.default_prefix = r_.word("a prefix");
        if (!m_.has_prefix(m_.default_prefix)) ts.fail(start, "default prefix " + m_.default_prefix + " is not declared");
        ts.expect_punct(";");
      } else if (ts.accept_word("options")) {
        options();
      } else if (ts.is_word("abstract") || ts.is_word("class")) {
        class_decl();
      } else if (ts.accept_word("association")) {
        association();
      } else if (ts.accept_word("subproperty")) {
        Generalization g;
        g.sub = r_.name();
        ts.expect_punct(":");
        g.super = r_.name();
        ts.expect_punct(";");
        m_.classes.association_generalizations.push_back(g);
      } else if (ts.accept_word("partition")) {
        partition();
      } else if (ts.accept_word("constraint")) {
        constraint(start);
      } else if (ts.accept_word("constructor")) {
        constructor(start);
      } else if (ts.accept_word("rule")) {
        rule(start);
      } else if (ts.accept_word("machine")) {
        machine();
      } else if (ts.accept_word("mutability")) {
        mutability();
      } else {
        ts.fail("expected a declaration, found " + detail::describe(start));
      }
    }
    return std::move(m_);
  }

 private:
  Term resolve(const Token& t) {
    try {
      return resolve_name(m_, t.text);
    } catch (const Error& e) {
      throw SyntaxError(t.line, t.column, e.what());
    }
  }

  void prefix() {
    TokenStream& ts = r_.ts();
    PrefixDecl d;
    d.prefix = r_.word("a prefix name");
    ts.expect_punct(":");
    d.iri = ts.expect(Tok::Iri, "an IRI in <...>").text;
    ts.expect_punct(";");
    m_.prefixes.push_back(std::move(d));
  }

  void options() {
    TokenStream& ts = r_.ts();
    ts.expect_punct("{");
    while (!ts.accept_punct("}")) {
      const Token key = ts.expect(Tok::Ident, "an option name");
      ts.expect_punct("=");
      const Token val = ts.expect(Tok::Ident, "an option value");
      if (key.text == "value-partition") {
        if (val.text == "disjoint-individuals") {
          m_.options.value_partition_strategy = ValuePartitionStrategy::DisjointIndividuals;
        } else if (val.text == "disjoint-subclasses") {
          m_.options.value_partition_strategy = ValuePartitionStrategy::DisjointSubclasses;
        } else {
          ts.fail(val, "unknown value-partition strategy " + val.text);
        }
      } else if (key.text == "part-whole") {
        if (val.text == "per-association") {
          m_.options.part_whole_strategy = PartWholeStrategy::PerAssociation;
        } else if (val.text == "single-haspart") {
          m_.options.part_whole_strategy = PartWholeStrategy::SingleHasPart;
        } else {
          ts.fail(val, "unknown part-whole strategy " + val.text);
        }
      } else if (key.text == "part-cardinality") {
        if (val.text != "true" && val.text != "false") ts.fail(val, "expected true or false");
        m_.options.part_whole_cardinality = val.text == "true";
      } else {
        ts.fail(key, "unknown option " + key.text);
      }
      ts.expect_punct(";");
    }
  }

  void class_decl() {
    TokenStream& ts = r_.ts();
    ClassDecl c;
    c.is_abstract = ts.accept_word("abstract");
    ts.expect_word("class");
    const Token at = ts.peek();
    c.name = r_.name();
    if (m_.classes.find_class(c.name)) ts.fail(at, "class " + c.name.text() + " is declared twice");
    m_.classes.classes.push_back(c);
    if (ts.accept_punct(":")) {
      do {
        m_.classes.generalizations.push_back({c.name, r_.name()});
      } while (ts.accept_punct(","));
    }
    if (ts.accept_punct(";")) return;
    ts.expect_punct("{");
    while (!ts.accept_punct("}")) {
      ts.expect_word("attribute");
      AttributeDecl a;
      a.owner = c.name;
      a.name = r_.name();
      ts.expect_punct(":");
      a.datatype = r_.word("a datatype");
      if (ts.is_punct("[")) a.multiplicity = r_.multiplicity();
      if (ts.accept_punct("=")) a.default_value = r_.term(Position::Object);
      ts.expect_punct(";");
      m_.classes.attributes.push_back(std::move(a));
    }
  }

  void association() {
    TokenStream& ts = r_.ts();
    AssociationDecl a;
    a.name = r_.name();
    ts.expect_punct(":");
    if (ts.accept_word("composition")) {
      a.kind = AssociationKind::Composition;
    } else if (ts.accept_word("aggregation")) {
      a.kind = AssociationKind::Aggregation;
    }
    a.source = r_.name();
    if (ts.is_punct("[")) a.source_multiplicity = r_.multiplicity();
    ts.expect_punct("->");
    a.target = r_.name();
    if (ts.is_punct("[")) a.target_multiplicity = r_.multiplicity();
    while (!ts.accept_punct(";")) {
      if (ts.accept_word("inverse")) {
        a.inverse = r_.name();
      } else if (ts.accept_word("ordered")) {
        a.ordered = true;
      } else if (ts.accept_word("nonunique")) {
        a.unique = false;
      } else if (ts.accept_word("note")) {
        a.notes.push_back(r_.string_literal("a note string"));
      } else {
        ts.fail("expected inverse, ordered, nonunique, note or ';', found " + detail::describe(ts.peek()));
      }
    }
    m_.classes.associations.push_back(std::move(a));
  }

  std::vector<PartitionValue> partition_values() {
    TokenStream& ts = r_.ts();
    ts.expect_punct("{");
    std::vector<PartitionValue> out;
    while (!ts.accept_punct("}")) {
      PartitionValue v;
      v.name = r_.word("a partition value");
      if (ts.is_punct("{")) v.children = partition_values();
      out.push_back(std::move(v));
    }
    return out;
  }

  void partition() {
    TokenStream& ts = r_.ts();
    ValuePartition p;
    p.partition_class = r_.name();
    ts.expect_word("on");
    p.owner = r_.name();
    ts.expect_punct(".");
    p.attribute = r_.name();
    p.values = partition_values();
    m_.classes.value_partitions.push_back(std::move(p));
  }

  void check_where(const Token& at, const GraphPattern& where, bool has_this) {
    std::set<std::string> outer;
    if (has_this) outer.insert("this");
    try {
      check_pattern_variables(where, outer);
    } catch (const Error& e) {
      throw SyntaxError(at.line, at.column, e.what(), e.code());
    }
  }

  void check_template(const Token& at, const std::string& owner, const ConstructTemplate& t,
                      const GraphPattern& where, bool has_this) {
    std::set<std::string> bound = where.bound_variables();
    if (has_this) bound.insert("this");
    for (const std::string& v : t.variables()) {
      if (!bound.count(v)) {
        throw SyntaxError(at.line, at.column, owner + ": template variable ?" + v + " is not bound by WHERE",
                          ErrorCode::UnboundTemplateVariable);
      }
    }
  }

  void constraint(const Token& at) {
    TokenStream& ts = r_.ts();
    AskConstraint c;
    c.id = r_.word("a constraint id");
    ts.expect_word("on");
    c.attached_class = r_.name();
    c.message = r_.string_literal("a constraint message");
    ts.expect_word("ASK");
    ts.expect_word("WHERE");
    c.body = r_.group();
    check_where(at, c.body, true);
    m_.constraints.push_back(std::move(c));
  }

  void constructor(const Token& at) {
    TokenStream& ts = r_.ts();
    Constructor c;
    ts.expect_word("on");
    c.attached_class = r_.name();
    ts.expect_word("CONSTRUCT");
    c.tmpl = r_.tmpl();
    ts.expect_word("WHERE");
    c.where = r_.group();
    check_where(at, c.where, true);
    check_template(at, "constructor", c.tmpl, c.where, true);
    m_.constructors.push_back(std::move(c));
  }

  void rule(const Token& at) {
    TokenStream& ts = r_.ts();
    TransitionRule r;
    r.id = r_.word("a rule id");
    if (ts.accept_word("on")) r.attached_class = r_.name();
    if (ts.accept_word("DELETE")) r.del = r_.tmpl();
    if (ts.accept_word("INSERT")) r.ins = r_.tmpl();
    ts.expect_word("WHERE");
    r.where = r_.group();
    const bool has_this = !r.attached_class.text().empty();
    check_where(at, r.where, has_this);
    check_template(at, "rule " + r.id, r.ins, r.where, has_this);
    for (const TransitionRule& other : m_.rules) {
      if (other.id == r.id) ts.fail(at, "rule " + r.id + " is declared twice");
    }
    m_.rules.push_back(std::move(r));
  }

  std::vector<std::string> strings_until(std::string_view stop) {
    TokenStream& ts = r_.ts();
    std::vector<std::string> out;
    while (!ts.is_punct(stop)) out.push_back(r_.string_literal("a state label"));
    return out;
  }

  void machine() {
    TokenStream& ts = r_.ts();
    StateMachineDecl d;
    d.name = r_.word("a machine name");
    ts.expect_word("on");
    d.subject_class = r_.name();
    ts.expect_punct(".");
    d.state_property = r_.name();
    if (ts.accept_word("variants")) {
      while (!ts.is_punct("{")) d.variants.push_back(r_.name());
    }
    ts.expect_punct("{");
    while (!ts.accept_punct("}")) {
      if (ts.accept_word("states")) {
        d.states = strings_until(";");
      } else if (ts.accept_word("initial")) {
        d.initial = r_.string_literal("the initial state");
      } else if (ts.accept_word("final")) {
        for (std::string& s : strings_until(";")) d.finals.insert(std::move(s));
      } else if (ts.accept_word("exclude")) {
        const Term type = r_.name();
        d.excludes[type] = strings_until(";");
      } else if (ts.accept_word("transition")) {
        DeclaredTransition t;
        t.id = r_.word("a transition id");
        t.source = r_.string_literal("a source state");
        ts.expect_punct("->");
        t.target = r_.string_literal("a target state");
        if (ts.accept_word("for")) {
          while (!ts.is_punct(";")) t.types.push_back(r_.name());
        }
        d.transitions.push_back(std::move(t));
      } else {
        ts.fail("expected states, initial, final, exclude or transition, found " + detail::describe(ts.peek()));
      }
      ts.expect_punct(";");
    }
    m_.machines.push_back(std::move(d));
  }

  void mutability() {
    TokenStream& ts = r_.ts();
    ts.expect_punct("{");
    while (!ts.accept_punct("}")) {
      const Token kw = ts.expect(Tok::Ident, "immutable, environment or rule-owned");
      Mutability kind;
      if (kw.text == "immutable") {
        kind = Mutability::Immutable;
      } else if (kw.text == "environment") {
        kind = Mutability::Environment;
      } else if (kw.text == "rule-owned") {
        kind = Mutability::RuleOwned;
      } else {
        ts.fail(kw, "expected immutable, environment or rule-owned, found " + detail::describe(kw));
      }
      const Term prop = r_.name();
      m_.mutability.kinds[prop] = kind;
      if (ts.accept_punct("{")) {
        std::vector<DomainValue> dom;
        while (!ts.accept_punct("}")) {
          if (ts.accept_word("absent")) {
            dom.push_back(DomainValue::absent());
          } else if (ts.accept_word("past")) {
            dom.push_back(DomainValue::past());
          } else if (ts.accept_word("future")) {
            dom.push_back(DomainValue::future());
          } else {
            dom.push_back(DomainValue::of(r_.term(Position::Object)));
          }
        }
        m_.mutability.domains[prop] = std::move(dom);
      }
      ts.expect_punct(";");
    }
  }

  WorkModel m_;
  Reader r_;
};

}  // namespace

WorkModel parse_model(std::string_view text) { return ModelParser(text).run(); }

TripleStore parse_triples(std::string_view text) {
  Reader r(text, [](const Token& t) {
    if (t.text.find(':') == std::string::npos) {
      throw SyntaxError(t.line, t.column, "name " + t.text + " has no prefix");
    }
    return Term::name(t.text);
  });
  TokenStream& ts = r.ts();
  TripleStore store;
  while (!ts.at_end()) {
    const Token at = ts.peek();
    Triple t;
    t.subject = r.term(Position::Subject);
    t.predicate = r.term(Position::Predicate);
    t.object = r.term(Position::Object);
    ts.expect_punct(".");
    if (t.subject.is_variable() || t.predicate.is_variable() || t.object.is_variable()) {
      throw SyntaxError(at.line, at.column, "variables are not allowed in data", ErrorCode::VariableInData);
    }
    store.add(t);
  }
  return store;
}

Scenario parse_scenario(std::string_view text, const WorkModel& model) {
  Reader r(text, [&model](const Token& t) {
    try {
      return resolve_name(model, t.text);
    } catch (const Error& e) {
      throw SyntaxError(t.line, t.column, e.what());
    }
  });
  TokenStream& ts = r.ts();
  Scenario sc;
  while (!ts.at_end()) {
    const Token at = ts.peek();
    if (!at.newline_before) ts.fail(at, "each scenario event must start on its own line");
    ScenarioEvent ev;
    ev.line = at.line;
    const std::string kw = r.word("a scenario event");
    if (kw == "scenario") {
      sc.name = r.string_literal("a scenario name");
      continue;
    }
    if (kw == "at") {
      ev.kind = ScenarioEvent::Kind::At;
      const Term t = r.term(Position::Object);
      if (t.kind() != TermKind::DateTime) ts.fail(at, "`at` expects a dateTime");
      ev.time = t.datetime_value();
    } else if (kw == "create") {
      ev.kind = ScenarioEvent::Kind::Create;
      ev.object = r.name();
      ts.expect_punct(":");
      ev.cls = r.name();
      if (ts.accept_punct("{")) {
        while (!ts.accept_punct("}")) {
          if (ts.at_end()) ts.fail("expected '}' to close the property block");
          Term p = r.term(Position::Predicate);
          Term v = r.term(Position::Object);
          if (v.is_variable()) ts.fail("variables are not allowed in scenarios");
          ev.properties.emplace_back(std::move(p), std::move(v));
        }
      }
    } else if (kw == "set" || kw == "expect") {
      ev.kind = kw == "set" ? ScenarioEvent::Kind::Set : ScenarioEvent::Kind::Expect;
      ev.object = r.name();
      ev.property = r.name();
      ev.value = r.term(Position::Object);
      if (ev.value.is_variable()) ts.fail("variables are not allowed in scenarios");
    } else if (kw == "clear") {
      ev.kind = ScenarioEvent::Kind::Clear;
      ev.object = r.name();
      ev.property = r.name();
    } else if (kw == "run") {
      ev.kind = ScenarioEvent::Kind::Run;
    } else if (kw == "check-constraints") {
      ev.kind = ScenarioEvent::Kind::CheckConstraints;
      while (!ts.at_end() && !ts.peek().newline_before) ev.constraint_ids.push_back(r.word("a constraint id"));
    } else {
      ts.fail(at, "unknown scenario event " + kw);
    }
    sc.events.push_back(std::move(ev));
  }
  return sc;
}

}  // namespace cwp
