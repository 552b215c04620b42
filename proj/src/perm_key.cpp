// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/perm_key.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qhe {

namespace {

void check_m(std::size_t m) {
  if (m == 0) throw std::invalid_argument("m must be positive");
}

Key factorial(std::size_t k) {
  Key f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<std::vector<std::size_t>> cycles_of(const std::vector<std::size_t>& images) {
  std::vector<bool> seen(images.size(), false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < images.size(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> cyc;
    for (std::size_t c = s; !seen[c]; c = images[c]) {
      seen[c] = true;
      cyc.push_back(c);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

Gate row_gate(const Gate& g, std::size_t width, std::size_t col) {
  Gate out = g;
  out.q0 = g.q0 * width + col;
  if (g.two_qubit()) out.q1 = g.q1 * width + col;
  return out;
}

}  // namespace

// ---------------------------------------------------------------- keys

PermKey PermKey::identity(std::size_t m) {
  check_m(m);
  std::vector<std::size_t> images(2 * m);
  std::iota(images.begin(), images.end(), std::size_t{0});
  return from_images(std::move(images));
}

PermKey PermKey::from_images(std::vector<std::size_t> images) {
  if (images.empty() || images.size() % 2) throw std::invalid_argument("permutation must act on 2m columns");
  std::vector<bool> hit(images.size(), false);
  for (std::size_t v : images) {
    if (v >= images.size() || hit[v]) throw std::invalid_argument("not a permutation");
    hit[v] = true;
  }
  PermKey k;
  k.images_ = std::move(images);
  return k;
}

Key perm_key_count(std::size_t m) {
  check_m(m);
  if (m > 10) throw std::out_of_range("key index space exceeds 64 bits for m > 10");
  return factorial(2 * m);
}

PermKey PermKey::from_index(std::size_t m, Key index) {
  if (index >= perm_key_count(m)) throw std::out_of_range("key index outside key space");
  const std::size_t n = 2 * m;
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::size_t> images;
  for (std::size_t i = 0; i < n; ++i) {
    const Key f = factorial(n - 1 - i);
    const auto d = static_cast<std::ptrdiff_t>(index / f);
    index %= f;
    images.push_back(pool[static_cast<std::size_t>(d)]);
    pool.erase(pool.begin() + d);
  }
  return from_images(std::move(images));
}

Key PermKey::index() const {
  const std::size_t n = images_.size();
  perm_key_count(n / 2);
  Key idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Key smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) smaller += images_[j] < images_[i];
    idx += smaller * factorial(n - 1 - i);
  }
  return idx;
}

PermKey PermKey::random(std::size_t m, std::mt19937_64& rng) {
  PermKey k = identity(m);
  std::shuffle(k.images_.begin(), k.images_.end(), rng);
  return k;
}

PermKey PermKey::parse(std::size_t m, const std::string& text) {
  std::vector<std::size_t> images(2 * m);
  std::iota(images.begin(), images.end(), std::size_t{0});
  std::vector<bool> used(2 * m, false);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("bad permutation '" + text + "': " + why);
  };
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    if (text[pos] != '(') fail("expected '('");
    const std::size_t close = text.find(')', pos);
    if (close == std::string::npos) fail("unbalanced parenthesis");
    std::istringstream in(text.substr(pos + 1, close - pos - 1));
    std::vector<std::size_t> cyc;
    std::string tok;
    while (in >> tok) {
      if (tok.find_first_not_of("0123456789") != std::string::npos) fail("non-numeric column");
      const std::size_t c = std::stoul(tok);
      if (c >= 2 * m) fail("column out of range");
      if (used[c]) fail("column repeated");
      used[c] = true;
      cyc.push_back(c);
    }
    for (std::size_t i = 0; i < cyc.size(); ++i) images[cyc[i]] = cyc[(i + 1) % cyc.size()];
    pos = close + 1;
  }
  return from_images(std::move(images));
}

PermKey PermKey::inverse() const {
  std::vector<std::size_t> inv(images_.size());
  for (std::size_t c = 0; c < images_.size(); ++c) inv[images_[c]] = c;
  return from_images(std::move(inv));
}

std::vector<std::size_t> PermKey::data_columns() const {
  return {images_.begin(), images_.begin() + static_cast<std::ptrdiff_t>(m())};
}

std::vector<std::pair<std::size_t, std::size_t>> PermKey::swaps() const {
  // For a cycle c0 -> c1 -> ... the swaps (c0,c1), (c0,c2), ... carry each
  // column to its image.
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& cyc : cycles_of(images_)) {
    for (std::size_t i = 1; i < cyc.size(); ++i) out.emplace_back(cyc[0], cyc[i]);
  }
  return out;
}

std::size_t PermKey::swap_count() const { return images_.size() - cycles_of(images_).size(); }

std::string PermKey::str() const {
  std::string out;
  for (const auto& cyc : cycles_of(images_)) {
    if (cyc.size() < 2) continue;
    out += '(';
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(cyc[i]);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

// ---------------------------------------------------------------- circuits

GateList spread_gates(std::size_t m, std::size_t base) {
  check_m(m);
  GateList g;
  for (std::size_t j = 1; j < m; ++j) g.push_back({GateKind::CNOT, base, base + j});
  for (std::size_t j = 1; j < m; ++j) g.push_back({GateKind::CNOT, base + j, base});
  return g;
}

GateList unspread_gates(std::size_t m, std::size_t base) {
  GateList g = spread_gates(m, base);
  std::reverse(g.begin(), g.end());
  return g;
}

double security_bound_log2(double r, double m) {
  if (!(m >= 1) || !(r >= 0)) throw std::invalid_argument("security bound needs m >= 1 and r >= 0");
  const double log_binom = std::lgamma(2 * m + 1) - 2 * std::lgamma(m + 1);
  return 0.5 * (r - log_binom / std::log(2.0));
}

double security_bound(std::size_t r, std::size_t m) {
  check_m(m);
  return std::exp2(security_bound_log2(static_cast<double>(r), static_cast<double>(m)));
}

bool perm_gate_allowed(std::size_t m, const Gate& g) {
  check_m(m);
  if (!g.clifford()) return false;
  if (m % 2 == 0) {
    return g.kind == GateKind::CNOT || g.kind == GateKind::CZ || g.kind == GateKind::SWAP ||
           g.kind == GateKind::Z;
  }
  if (g.kind == GateKind::S) return m % 4 == 1;
  return true;
}

GateList transversal_gates(std::size_t m, const Gate& g) {
  GateList out;
  for (std::size_t col = 0; col < 2 * m; ++col) out.push_back(row_gate(g, 2 * m, col));
  return out;
}

GateList permutation_gates(const PermKey& key, std::size_t rows) {
  const std::size_t w = 2 * key.m();
  GateList out;
  for (std::size_t row = 0; row < rows; ++row) {
    for (const auto& [a, b] : key.swaps()) out.push_back({GateKind::SWAP, row * w + a, row * w + b});
  }
  return out;
}

std::size_t decryption_complexity(const PermKey& key, std::size_t rows) { return rows * key.inverse().swap_count(); }

// ---------------------------------------------------------------- scheme

PermutationKeyScheme::PermutationKeyScheme(std::size_t m, std::size_t rows) : m_(m), rows_(rows) {
  perm_key_count(m);
  if (rows == 0) throw std::invalid_argument("need at least one row");
}

EncryptionProgram PermutationKeyScheme::encryption(Key key) const {
  const std::size_t w = 2 * m_;
  EncryptionProgram p;
  p.cipher_qubits = rows_ * w;
  for (std::size_t row = 0; row < rows_; ++row) {
    p.data_positions.push_back(row * w);
    const auto s = spread_gates(m_, row * w);
    p.gates.insert(p.gates.end(), s.begin(), s.end());
  }
  const auto perm = permutation_gates(PermKey::from_index(m_, key), rows_);
  p.gates.insert(p.gates.end(), perm.begin(), perm.end());
  return p;
}

bool PermutationKeyScheme::allowed(const GateList& c) const {
  return std::all_of(c.begin(), c.end(), [&](const Gate& g) {
    return g.q0 < rows_ && (!g.two_qubit() || g.q1 < rows_) && perm_gate_allowed(m_, g);
  });
}

GateList PermutationKeyScheme::lift(const GateList& c) const {
  GateList out;
  for (const auto& g : c) {
    const auto t = transversal_gates(m_, g);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

DecryptionProgram PermutationKeyScheme::decryption(Key key, const GateList&) const {
  const std::size_t w = 2 * m_;
  DecryptionProgram d;
  d.gates = permutation_gates(PermKey::from_index(m_, key).inverse(), rows_);
  for (std::size_t row = 0; row < rows_; ++row) {
    const auto u = unspread_gates(m_, row * w);
    d.gates.insert(d.gates.end(), u.begin(), u.end());
    d.keep.push_back(row * w);
  }
  return d;
}

// ---------------------------------------------------------------- register

std::string row_role_name(RowRole role) {
  switch (role) {
    case RowRole::Data: return "data";
    case RowRole::Magic: return "magic";
    case RowRole::Zero: return "zero-ancilla";
    case RowRole::One: return "one-ancilla";
    case RowRole::Syndrome: return "syndrome-ancilla";
  }
  return "?";
}

template <class State>
SpreadRegister<State>::SpreadRegister(PermKey key) : key_(std::move(key)) {}

template <class State>
std::size_t SpreadRegister<State>::index_of(std::size_t id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw std::out_of_range("unknown row id " + std::to_string(id));
  return static_cast<std::size_t>(it - ids_.begin());
}

template <class State>
RowRole SpreadRegister<State>::role(std::size_t id) const {
  return roles_[index_of(id)];
}

template <class State>
std::size_t SpreadRegister<State>::qubit(std::size_t id, std::size_t col) const {
  if (col >= 2 * m()) throw std::out_of_range("column out of range");
  return index_of(id) * 2 * m() + col;
}

template <class State>
std::vector<std::size_t> SpreadRegister<State>::add_rows(const State& col0, RowRole role) {
  const std::size_t k = col0.n_qubits();
  const std::size_t w = 2 * m();
  if (k == 0) throw std::invalid_argument("no rows to add");
  State block = col0.tensor(State::maximally_mixed(k * (w - 1)));
  std::vector<std::size_t> order;
  for (std::size_t row = 0; row < k; ++row) {
    order.push_back(row);
    for (std::size_t col = 1; col < w; ++col) order.push_back(k + row * (w - 1) + col - 1);
  }
  block = block.reduced(order);
  for (std::size_t row = 0; row < k; ++row) block.apply_gates(spread_gates(m(), row * w));
  block.apply_gates(permutation_gates(key_, k));
  state_ = state_ ? state_->tensor(block) : block;

  std::vector<std::size_t> out;
  for (std::size_t row = 0; row < k; ++row) {
    out.push_back(next_id_);
    ids_.push_back(next_id_++);
    roles_.push_back(role);
  }
  if (role != RowRole::Data) r_ += k;
  return out;
}

template <class State>
std::size_t SpreadRegister<State>::add_repetition_row(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("bit must be 0 or 1");
  State block = State::zero_state(m()).tensor(State::maximally_mixed(m()));
  if (b) {
    for (std::size_t c = 0; c < m(); ++c) block.apply_gate({GateKind::X, c, 0});
  }
  block.apply_gates(permutation_gates(key_, 1));
  state_ = state_ ? state_->tensor(block) : block;
  ids_.push_back(next_id_);
  roles_.push_back(b ? RowRole::One : RowRole::Zero);
  ++r_;
  return next_id_++;
}

template <class State>
void SpreadRegister<State>::transversal(const Gate& g) {
  if (!perm_gate_allowed(m(), g)) throw NotAllowed("gate not supported transversally at this m");
  Gate local = g;
  local.q0 = index_of(g.q0);
  if (g.two_qubit()) local.q1 = index_of(g.q1);
  state_.value().apply_gates(transversal_gates(m(), local));
}

template <class State>
void SpreadRegister<State>::apply_physical(const GateList& gates) {
  state_.value().apply_gates(gates);
}

template <class State>
std::vector<int> SpreadRegister<State>::measure_and_discard(std::size_t id, std::mt19937_64& rng) {
  State& s = state_.value();
  std::vector<int> bits;
  for (std::size_t col = 0; col < 2 * m(); ++col) {
    const auto q = qubit(id, col);
    bits.push_back(s.measure_pauli(PauliString::single(s.n_qubits(), q, 'Z'), rng).outcome);
  }
  discard(id);
  return bits;
}

template <class State>
void SpreadRegister<State>::discard(std::size_t id) {
  const std::size_t idx = index_of(id);
  const std::size_t w = 2 * m();
  std::vector<std::size_t> keep;
  for (std::size_t q = 0; q < ids_.size() * w; ++q) {
    if (q / w != idx) keep.push_back(q);
  }
  ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(idx));
  roles_.erase(roles_.begin() + static_cast<std::ptrdiff_t>(idx));
  if (ids_.empty()) {
    state_.reset();
  } else {
    state_ = state_->reduced(keep);
  }
}

template <class State>
int SpreadRegister<State>::parity(const std::vector<int>& bits) const {
  if (bits.size() != 2 * m()) throw std::invalid_argument("expected 2m measurement bits");
  int p = 0;
  for (std::size_t c : key_.data_columns()) p ^= bits[c];
  return p;
}

template <class State>
State SpreadRegister<State>::decrypt(const std::vector<std::size_t>& ids) const {
  const std::size_t w = 2 * m();
  std::vector<std::size_t> qs;
  for (std::size_t id : ids) {
    for (std::size_t col = 0; col < w; ++col) qs.push_back(qubit(id, col));
  }
  State s = state_.value().reduced(qs);
  s.apply_gates(permutation_gates(key_.inverse(), ids.size()));
  std::vector<std::size_t> keep;
  for (std::size_t row = 0; row < ids.size(); ++row) {
    s.apply_gates(unspread_gates(m(), row * w));
    keep.push_back(row * w);
  }
  return s.reduced(keep);
}

template class SpreadRegister<DensityMatrix>;
template class SpreadRegister<StabilizerState>;

// ---------------------------------------------------------------- T gates

GateList controlled_s_gates(std::size_t control, std::size_t target) {
  return {{GateKind::T, control, 0},
          {GateKind::T, target, 0},
          {GateKind::CNOT, control, target},
          {GateKind::TDG, target, 0},
          {GateKind::CNOT, control, target}};
}

namespace {

template <class State>
std::vector<int> teleport_into_magic(SpreadRegister<State>& reg, std::size_t data_row, std::size_t magic_row,
                                     std::mt19937_64& rng, Transcript* transcript) {
  reg.transversal({GateKind::CNOT, data_row, magic_row});
  auto bits = reg.measure_and_discard(magic_row, rng);
  if (transcript) transcript->classical(Party::Server, "t-outcome", bits);
  return bits;
}

// Client hands over |0> and |1> rows in random order; returns their ids.
template <class State>
std::pair<std::size_t, std::size_t> add_bit_pair(SpreadRegister<State>& reg, std::mt19937_64& rng,
                                                 Transcript* transcript) {
  const int first = static_cast<int>(rng() & 1u);
  const std::size_t a = reg.add_repetition_row(first);
  const std::size_t b = reg.add_repetition_row(1 - first);
  if (transcript) transcript->handoff(Party::Client, "ancilla-rows", 4 * reg.m());
  return {a, b};
}

}  // namespace

PermTOutcome t_gate_probabilistic(SpreadRegister<DensityMatrix>& reg, std::size_t data_row, std::mt19937_64& rng,
                                  Transcript* transcript) {
  const std::size_t magic = reg.add_rows(DensityMatrix::named("T"), RowRole::Magic).front();
  if (transcript) transcript->handoff(Party::Client, "magic-row", 2 * reg.m());
  PermTOutcome out;
  out.bits = teleport_into_magic(reg, data_row, magic, rng, transcript);
  out.parity = reg.parity(out.bits);
  out.success = out.parity == 0;
  return out;
}

PermTOutcome t_gate_deterministic(SpreadRegister<DensityMatrix>& reg, std::size_t data_row, std::mt19937_64& rng,
                                  Transcript* transcript) {
  if (reg.m() % 4 != 1) throw NotAllowed("deterministic T needs a transversal S (m = 1 mod 4)");
  const std::size_t magic = reg.add_rows(DensityMatrix::named("T"), RowRole::Magic).front();
  if (transcript) transcript->handoff(Party::Client, "magic-row", 2 * reg.m());
  const auto [a, b] = add_bit_pair(reg, rng, transcript);

  PermTOutcome out;
  out.bits = teleport_into_magic(reg, data_row, magic, rng, transcript);
  out.parity = reg.parity(out.bits);
  // Parity 1 left T^dagger; S T^dagger = T.
  const std::size_t chosen = reg.role(a) == (out.parity ? RowRole::One : RowRole::Zero) ? a : b;
  out.label = chosen == a ? 0 : 1;
  if (transcript) transcript->classical(Party::Client, "correction-row", {static_cast<int>(*out.label)});

  GateList gates;
  for (std::size_t col = 0; col < 2 * reg.m(); ++col) {
    const auto cs = controlled_s_gates(reg.qubit(chosen, col), reg.qubit(data_row, col));
    gates.insert(gates.end(), cs.begin(), cs.end());
  }
  reg.apply_physical(gates);
  reg.discard(a);
  reg.discard(b);
  out.success = true;
  return out;
}

// ---------------------------------------------------------------- QEC rounds

template <class State>
int encrypted_syndrome_round(SpreadRegister<State>& reg, const std::vector<std::size_t>& rows,
                             const PauliString& stabilizer, std::mt19937_64& rng, Transcript* transcript) {
  if (stabilizer.size() != rows.size()) throw SizeMismatch("stabilizer size does not match the row list");
  if (!stabilizer.is_hermitian()) throw std::invalid_argument("stabilizer must be Hermitian");
  const std::size_t anc = reg.add_rows(State::zero_state(1), RowRole::Syndrome).front();
  if (transcript) transcript->handoff(Party::Client, "syndrome-row", 2 * reg.m());

  auto s_dagger = [&](std::size_t row) {
    for (int i = 0; i < 3; ++i) reg.transversal({GateKind::S, row, 0});
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int letter = stabilizer.letter(i);
    if (letter == 0) continue;
    const std::size_t row = rows[i];
    // Rotate the row so the letter reads as Z, copy its parity, rotate back.
    if (letter == 2) s_dagger(row);
    if (letter != 3) reg.transversal({GateKind::H, row, 0});
    reg.transversal({GateKind::CNOT, row, anc});
    if (letter != 3) reg.transversal({GateKind::H, row, 0});
    if (letter == 2) reg.transversal({GateKind::S, row, 0});
  }
  const auto bits = reg.measure_and_discard(anc, rng);
  if (transcript) transcript->classical(Party::Server, "syndrome-bits", bits);
  return reg.parity(bits) ^ (stabilizer.phase() == 2 ? 1 : 0);
}

template <class State>
std::size_t encrypted_conditional_pauli(SpreadRegister<State>& reg, std::size_t row, char pauli, int apply,
                                        std::mt19937_64& rng, Transcript* transcript) {
  if (pauli != 'X' && pauli != 'Y' && pauli != 'Z') throw std::invalid_argument("correction must be X, Y or Z");
  if (apply != 0 && apply != 1) throw std::invalid_argument("apply must be 0 or 1");
  if (reg.m() % 2 == 0) throw NotAllowed("conditional Paulis need odd m");
  if (pauli == 'Y' && reg.m() % 4 != 1) throw NotAllowed("controlled Y needs m = 1 mod 4");
  const auto [a, b] = add_bit_pair(reg, rng, transcript);
  const std::size_t chosen = reg.role(a) == (apply ? RowRole::One : RowRole::Zero) ? a : b;
  const std::size_t label = chosen == a ? 0 : 1;
  if (transcript) transcript->classical(Party::Client, "correction-row", {static_cast<int>(label)});

  GateList gates;
  for (std::size_t col = 0; col < 2 * reg.m(); ++col) {
    const std::size_t c = reg.qubit(chosen, col), t = reg.qubit(row, col);
    switch (pauli) {
      case 'X': gates.push_back({GateKind::CNOT, c, t}); break;
      case 'Z': gates.push_back({GateKind::CZ, c, t}); break;
      default:
        for (int i = 0; i < 3; ++i) gates.push_back({GateKind::S, t, 0});
        gates.push_back({GateKind::CNOT, c, t});
        gates.push_back({GateKind::S, t, 0});
        break;
    }
  }
  reg.apply_physical(gates);
  reg.discard(a);
  reg.discard(b);
  return label;
}

template int encrypted_syndrome_round(SpreadRegister<DensityMatrix>&, const std::vector<std::size_t>&,
                                      const PauliString&, std::mt19937_64&, Transcript*);
template int encrypted_syndrome_round(SpreadRegister<StabilizerState>&, const std::vector<std::size_t>&,
                                      const PauliString&, std::mt19937_64&, Transcript*);
template std::size_t encrypted_conditional_pauli(SpreadRegister<DensityMatrix>&, std::size_t, char, int,
                                                 std::mt19937_64&, Transcript*);
template std::size_t encrypted_conditional_pauli(SpreadRegister<StabilizerState>&, std::size_t, char, int,
                                                 std::mt19937_64&, Transcript*);

// ---------------------------------------------------------------- concatenation

PauliString concatenated_logical(const PauliString& inner, std::size_t m) {
  check_m(m);
  const std::size_t w = 2 * m;
  PauliString out(inner.size() * w);
  for (std::size_t row = 0; row < inner.size(); ++row) {
    for (std::size_t col = 0; col < m; ++col) out.set_letter(row * w + col, "IXYZ"[inner.letter(row)]);
  }
  out.set_phase(inner.phase());
  return out;
}

ConcatenatedCode build_concatenated_code(std::size_t n, const GateList& inner_encoder, const PauliString& inner_x,
                                         const PauliString& inner_z, std::size_t m) {
  if (n == 0) throw std::invalid_argument("inner code needs at least one qubit");
  for (const auto& g : inner_encoder) {
    if (!g.clifford()) throw NotAllowed("inner encoder must be Clifford");
    if (g.q0 >= n || (g.two_qubit() && g.q1 >= n)) throw std::out_of_range("inner encoder outside the code");
  }
  if (inner_x.size() != n || inner_z.size() != n) throw SizeMismatch("inner logicals have the wrong size");
  if (inner_x.commutes(inner_z)) throw std::invalid_argument("inner logical X and Z must anticommute");
  for (const auto* p : {&inner_x, &inner_z}) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p->letter(q) == 2 && m % 4 != 1) throw NotAllowed("Y in an inner logical needs m = 1 mod 4");
      if (p->letter(q) != 0 && p->letter(q) != 3 && m % 2 == 0) throw NotAllowed("even m spreads only Z logicals");
    }
  }
  ConcatenatedCode c;
  c.n = n;
  c.m = m;
  c.inner_encoder = inner_encoder;
  c.logical_x = concatenated_logical(inner_x, m);
  c.logical_z = concatenated_logical(inner_z, m);
  return c;
}

namespace {

template <class State>
State inner_encode_impl(const ConcatenatedCode& code, const State& plain) {
  if (plain.n_qubits() != 1) throw SizeMismatch("inner encoding takes one plaintext qubit");
  State s = code.n > 1 ? plain.tensor(State::zero_state(code.n - 1)) : plain;
  s.apply_gates(code.inner_encoder);
  return s;
}

}  // namespace

DensityMatrix inner_encode(const ConcatenatedCode& code, const DensityMatrix& plain) {
  return inner_encode_impl(code, plain);
}

StabilizerState inner_encode(const ConcatenatedCode& code, const StabilizerState& plain) {
  return inner_encode_impl(code, plain);
}

}  // namespace qhe
