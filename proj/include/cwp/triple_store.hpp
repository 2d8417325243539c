#ifndef CWP_TRIPLE_STORE_HPP
#define CWP_TRIPLE_STORE_HPP

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cwp/term.hpp"

namespace cwp {

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  /// `<s> <p> <o> .`
  std::string to_string() const;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;
};

/// Order-independent 128-bit fingerprint of a store's contents.
struct Digest {
  std::uint64_t high = 0;
  std::uint64_t low = 0;

  std::string to_hex() const;
  friend bool operator==(const Digest&, const Digest&) = default;
  friend auto operator<=>(const Digest&, const Digest&) = default;
};

/// FNV-1a 128 over raw bytes.
Digest fnv1a_128(std::string_view bytes);

/// Duplicate-free triple set with subject/predicate/object indexes.
///
/// Iteration is in triple order (subject, predicate, object by canonical
/// text). The digest is maintained incrementally as the modular sum of
/// per-triple hashes, so it does not depend on insertion history.
class TripleStore {
 public:
  using const_iterator = std::set<Triple>::const_iterator;

  /// Throws VariableInData if any position holds a variable.
  bool add(const Triple& t);
  bool remove(const Triple& t);
  bool contains(const Triple& t) const { return triples_.count(t) != 0; }

  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  std::uint64_t revision() const noexcept { return revision_; }

  const_iterator begin() const { return triples_.begin(); }
  const_iterator end() const { return triples_.end(); }

  /// Visit triples matching the given positions; nullptr is a wildcard.
  /// The callback may not mutate the store.
  template <class Fn>
  void for_each_match(const Term* s, const Term* p, const Term* o, Fn&& fn) const;

  std::vector<Triple> find(const Term* s, const Term* p, const Term* o) const;
  std::vector<Term> objects(const Term& s, const Term& p) const;
  std::vector<Term> subjects(const Term& p, const Term& o) const;
  /// Subjects typed `cls` (via the type predicate), sorted.
  std::vector<Term> instances_of(const Term& cls) const;
  bool has_type(const Term& s, const Term& cls) const;

  Digest digest() const noexcept { return digest_; }

  friend bool operator==(const TripleStore& a, const TripleStore& b) {
    return a.triples_ == b.triples_;
  }

 private:
  using Index = std::unordered_map<Term, std::set<Triple>, TermHash>;
  static void index_erase(Index& index, const Term& key, const Triple& t);

  std::set<Triple> triples_;
  Index by_subject_;
  Index by_predicate_;
  Index by_object_;
  std::uint64_t revision_ = 0;
  Digest digest_;
};

template <class Fn>
void TripleStore::for_each_match(const Term* s, const Term* p, const Term* o, Fn&& fn) const {
  auto accept = [&](const Triple& t) {
    if ((s == nullptr || t.subject == *s) && (p == nullptr || t.predicate == *p) &&
        (o == nullptr || t.object == *o)) {
      fn(t);
    }
  };
  const std::set<Triple>* range = &triples_;
  if (s != nullptr) {
    auto it = by_subject_.find(*s);
    if (it == by_subject_.end()) return;
    range = &it->second;
    if (p != nullptr) {
      // The per-subject set is sorted by predicate next; jump to it.
      auto first = range->lower_bound(Triple{*s, *p, Term()});
      for (auto i = first; i != range->end() && i->predicate == *p; ++i) accept(*i);
      return;
    }
  } else if (o != nullptr) {
    auto it = by_object_.find(*o);
    if (it == by_object_.end()) return;
    range = &it->second;
  } else if (p != nullptr) {
    auto it = by_predicate_.find(*p);
    if (it == by_predicate_.end()) return;
    range = &it->second;
  }
  for (const Triple& t : *range) accept(t);
}

/// Canonical text: one sorted triple per line, each terminated by " .\n".
std::string serialize(const TripleStore& store);

Digest store_digest(const TripleStore& store);

}  // namespace cwp

#endif  // CWP_TRIPLE_STORE_HPP
