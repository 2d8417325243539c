#include "cwp/triple_store.hpp"

#include <cstdio>

#include "cwp/error.hpp"

namespace cwp {

namespace {

using u128 = unsigned __int128;

constexpr u128 kFnvOffset =
    (static_cast<u128>(0x6c62272e07bb0142ULL) << 64) | 0x62b821756295c58dULL;
constexpr u128 kFnvPrime = (static_cast<u128>(1) << 88) | 0x13bULL;

u128 to_u128(const Digest& d) { return (static_cast<u128>(d.high) << 64) | d.low; }

Digest from_u128(u128 v) {
  return Digest{static_cast<std::uint64_t>(v >> 64), static_cast<std::uint64_t>(v)};
}

Digest triple_hash(const Triple& t) { return fnv1a_128(t.to_string()); }

}  // namespace

std::string Triple::to_string() const {
  std::string out;
  out.reserve(subject.text().size() + predicate.text().size() + object.text().size() + 4);
  out += subject.text();
  out += ' ';
  out += predicate.text();
  out += ' ';
  out += object.text();
  out += " .";
  return out;
}

std::string Digest::to_hex() const {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(high),
                static_cast<unsigned long long>(low));
  return buf;
}

Digest fnv1a_128(std::string_view bytes) {
  u128 h = kFnvOffset;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return from_u128(h);
}

bool TripleStore::add(const Triple& t) {
  if (t.subject.is_variable() || t.predicate.is_variable() || t.object.is_variable()) {
    throw Error(ErrorCode::VariableInData, "variable in stored triple: " + t.to_string());
  }
  if (!t.subject.is_name() || !t.predicate.is_name()) {
    throw Error(ErrorCode::InvalidArgument, "subject and predicate must be names: " + t.to_string());
  }
  if (!triples_.insert(t).second) return false;
  by_subject_[t.subject].insert(t);
  by_predicate_[t.predicate].insert(t);
  by_object_[t.object].insert(t);
  digest_ = from_u128(to_u128(digest_) + to_u128(triple_hash(t)));
  ++revision_;
  return true;
}

void TripleStore::index_erase(Index& index, const Term& key, const Triple& t) {
  auto it = index.find(key);
  if (it == index.end()) return;
  it->second.erase(t);
  if (it->second.empty()) index.erase(it);
}

bool TripleStore::remove(const Triple& t) {
  auto it = triples_.find(t);
  if (it == triples_.end()) return false;
  const Triple held = *it;
  triples_.erase(it);
  index_erase(by_subject_, held.subject, held);
  index_erase(by_predicate_, held.predicate, held);
  index_erase(by_object_, held.object, held);
  digest_ = from_u128(to_u128(digest_) - to_u128(triple_hash(held)));
  ++revision_;
  return true;
}

std::vector<Triple> TripleStore::find(const Term* s, const Term* p, const Term* o) const {
  std::vector<Triple> out;
  for_each_match(s, p, o, [&](const Triple& t) { out.push_back(t); });
  return out;
}

std::vector<Term> TripleStore::objects(const Term& s, const Term& p) const {
  std::vector<Term> out;
  for_each_match(&s, &p, nullptr, [&](const Triple& t) { out.push_back(t.object); });
  return out;
}

std::vector<Term> TripleStore::subjects(const Term& p, const Term& o) const {
  std::vector<Term> out;
  for_each_match(nullptr, &p, &o, [&](const Triple& t) { out.push_back(t.subject); });
  return out;
}

std::vector<Term> TripleStore::instances_of(const Term& cls) const {
  return subjects(rdf_type(), cls);
}

bool TripleStore::has_type(const Term& s, const Term& cls) const {
  return contains(Triple{s, rdf_type(), cls});
}

std::string serialize(const TripleStore& store) {
  std::string out;
  for (const Triple& t : store) {
    out += t.to_string();
    out += '\n';
  }
  return out;
}

Digest store_digest(const TripleStore& store) { return store.digest(); }

}  // namespace cwp
