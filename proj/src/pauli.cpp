// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/pauli.hpp"

#include <bit>

namespace qhe {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

void require_same_size(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) {
    throw SizeMismatch("Pauli length mismatch: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
}

}  // namespace

PauliString::PauliString(std::size_t n_qubits)
    : n_(n_qubits), xs_(word_count(n_qubits), 0), zs_(word_count(n_qubits), 0) {}

PauliString PauliString::parse(std::string_view text) {
  Phase phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase = (phase + 1) & 3u;
    ++pos;
  }
  std::string_view letters = text.substr(pos);
  if (letters.empty()) throw std::invalid_argument("empty Pauli string");
  PauliString p(letters.size());
  for (std::size_t q = 0; q < letters.size(); ++q) p.set_letter(q, letters[q]);
  p.phase_ = phase;
  return p;
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, char letter) {
  if (qubit >= n_qubits) throw std::out_of_range("qubit index out of range");
  PauliString p(n_qubits);
  p.set_letter(qubit, letter);
  return p;
}

void PauliString::set_x(std::size_t q, bool v) {
  const std::uint64_t mask = std::uint64_t{1} << (q & 63);
  if (v) {
    xs_[q >> 6] |= mask;
  } else {
    xs_[q >> 6] &= ~mask;
  }
}

void PauliString::set_z(std::size_t q, bool v) {
  const std::uint64_t mask = std::uint64_t{1} << (q & 63);
  if (v) {
    zs_[q >> 6] |= mask;
  } else {
    zs_[q >> 6] &= ~mask;
  }
}

int PauliString::letter(std::size_t q) const {
  const bool xb = x(q);
  const bool zb = z(q);
  if (xb && zb) return 2;
  if (xb) return 1;
  if (zb) return 3;
  return 0;
}

void PauliString::set_letter(std::size_t q, char letter) {
  switch (letter) {
    case 'I': case '_': set_x(q, false); set_z(q, false); break;
    case 'X': set_x(q, true); set_z(q, false); break;
    case 'Y': set_x(q, true); set_z(q, true); break;
    case 'Z': set_x(q, false); set_z(q, true); break;
    default: throw std::invalid_argument(std::string("bad Pauli letter '") + letter + "'");
  }
}

bool PauliString::is_identity() const {
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    if (xs_[w] | zs_[w]) return false;
  }
  return true;
}

std::size_t PauliString::weight() const {
  std::size_t total = 0;
  for (std::size_t w = 0; w < xs_.size(); ++w) total += std::popcount(xs_[w] | zs_[w]);
  return total;
}

PauliString PauliString::unsigned_copy() const {
  PauliString out = *this;
  out.phase_ = 0;
  return out;
}

bool PauliString::commutes(const PauliString& other) const {
  require_same_size(*this, other);
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    acc ^= (xs_[w] & other.zs_[w]) ^ (zs_[w] & other.xs_[w]);
  }
  return (std::popcount(acc) & 1) == 0;
}

PauliString& PauliString::operator*=(const PauliString& rhs) {
  require_same_size(*this, rhs);
  // Two-bit per-qubit counter of the log_i scalar accumulated by the letter products.
  std::uint64_t cnt1 = 0;
  std::uint64_t cnt2 = 0;
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    const std::uint64_t x1 = xs_[w], z1 = zs_[w];
    const std::uint64_t x2 = rhs.xs_[w], z2 = rhs.zs_[w];
    const std::uint64_t nx = x1 ^ x2;
    const std::uint64_t nz = z1 ^ z2;
    const std::uint64_t x1z2 = x1 & z2;
    const std::uint64_t anti = (x2 & z1) ^ x1z2;
    cnt2 ^= (cnt1 ^ nx ^ nz ^ x1z2) & anti;
    cnt1 ^= anti;
    xs_[w] = nx;
    zs_[w] = nz;
  }
  const unsigned log_i = static_cast<unsigned>(std::popcount(cnt1)) +
                         2u * static_cast<unsigned>(std::popcount(cnt2));
  phase_ = static_cast<Phase>((phase_ + rhs.phase_ + log_i) & 3u);
  return *this;
}

PauliString operator*(PauliString a, const PauliString& b) {
  a *= b;
  return a;
}

PauliString multiply(const PauliString& a, const PauliString& b) { return a * b; }

bool same_up_to_phase(const PauliString& a, const PauliString& b) {
  return a.size() == b.size() && a.x_words() == b.x_words() && a.z_words() == b.z_words();
}

PauliString PauliString::restrict_to(const std::vector<std::size_t>& qubits) const {
  PauliString out(qubits.size());
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    out.set_x(i, x(qubits[i]));
    out.set_z(i, z(qubits[i]));
  }
  out.phase_ = phase_;
  return out;
}

PauliString PauliString::embed(std::size_t n_total, const std::vector<std::size_t>& positions) const {
  if (positions.size() != n_) throw SizeMismatch("embed: position count mismatch");
  PauliString out(n_total);
  for (std::size_t i = 0; i < n_; ++i) {
    if (positions[i] >= n_total) throw std::out_of_range("embed: position out of range");
    out.set_x(positions[i], x(i));
    out.set_z(positions[i], z(i));
  }
  out.phase_ = phase_;
  return out;
}

PauliString PauliString::tensor(const PauliString& other) const {
  PauliString out(n_ + other.n_);
  for (std::size_t q = 0; q < n_; ++q) {
    out.set_x(q, x(q));
    out.set_z(q, z(q));
  }
  for (std::size_t q = 0; q < other.n_; ++q) {
    out.set_x(n_ + q, other.x(q));
    out.set_z(n_ + q, other.z(q));
  }
  out.phase_ = static_cast<Phase>((phase_ + other.phase_) & 3u);
  return out;
}

std::string PauliString::str() const {
  static constexpr const char* kSigns[4] = {"+", "+i", "-", "-i"};
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::string out = kSigns[phase_];
  out.reserve(out.size() + n_);
  for (std::size_t q = 0; q < n_; ++q) out.push_back(kLetters[letter(q)]);
  return out;
}

}  // namespace qhe
