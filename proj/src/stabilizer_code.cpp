// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/stabilizer_code.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

#include "qhelab/circuit.hpp"
#include "qhelab/pauli_key.hpp"

namespace qhe {

namespace {

// Stabilizer group of the code as a (mixed) tableau, for membership tests.
StabilizerState group_of(const StabilizerCode& code) {
  return StabilizerState::from_generators(code.n, code.generators);
}

// p is +1 on the code space (p is in the group with sign +).
bool in_group(const StabilizerState& group, const PauliString& p) {
  if (!p.is_hermitian()) return false;
  const auto ev = group.eigenvalue(p);
  return ev && *ev == 1;
}

// a == b modulo the stabilizer group, signs included.
bool equal_mod_group(const StabilizerState& group, const PauliString& a, const PauliString& b) {
  PauliString prod = a;
  prod *= b;
  return in_group(group, prod);
}

// Solves A v = rhs over GF(2); rows are constraint vectors. Returns a solution.
std::vector<std::uint8_t> solve_gf2(std::vector<std::vector<std::uint8_t>> a, std::vector<std::uint8_t> rhs) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && !a[p][c]) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(rhs[p], rhs[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i != r && a[i][c]) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] ^= a[r][j];
        rhs[i] ^= rhs[r];
      }
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (rhs[i]) throw std::invalid_argument("inconsistent symplectic constraints");
  }
  std::vector<std::uint8_t> v(cols, 0);
  for (std::size_t i = 0; i < r; ++i) v[pivot_col[i]] = rhs[i];
  return v;
}

// Symplectic-product row: <v, a> = sum_q v_x(q) a_z(q) + v_z(q) a_x(q),
// with v laid out as (x_0..x_{n-1}, z_0..z_{n-1}).
std::vector<std::uint8_t> constraint_row(const PauliString& a) {
  const std::size_t n = a.size();
  std::vector<std::uint8_t> row(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    row[q] = a.z(q);
    row[n + q] = a.x(q);
  }
  return row;
}

void enumerate_errors(const StabilizerCode& code, std::size_t weight, std::size_t start, PauliString& current,
                      std::map<Syndrome, PauliString>& table) {
  if (weight == 0) {
    table.emplace(syndrome_of(code, current), current);
    return;
  }
  std::string letters;
  for (char c : std::string("XYZ")) {
    if (code.corrects.find(c) != std::string::npos) letters.push_back(c);
  }
  for (std::size_t q = start; q + weight <= code.n; ++q) {
    for (char c : letters) {
      current.set_letter(q, c);
      enumerate_errors(code, weight - 1, q + 1, current, table);
    }
    current.set_letter(q, 'I');
  }
}

StabilizerCode make_code(std::string name, std::size_t n, std::size_t d, std::string corrects,
                         const std::vector<std::string>& gens, const std::string& lx, const std::string& lz,
                         const GateList& encoder_gates) {
  StabilizerCode c;
  c.name = std::move(name);
  c.n = n;
  c.k = 1;
  c.d = d;
  c.corrects = std::move(corrects);
  for (const auto& g : gens) c.generators.push_back(PauliString::parse(g));
  c.logical_x = {PauliString::parse(lx)};
  c.logical_z = {PauliString::parse(lz)};
  c.encoder = encoder_gates.empty() ? synthesize_encoder(n, c.generators, c.logical_x, c.logical_z)
                                    : CliffordOp::from_gates(n, encoder_gates);
  c.validate();
  return c;
}

template <class State>
State encode_impl(const StabilizerCode& code, const State& logical) {
  if (logical.n_qubits() != code.k) throw SizeMismatch("encode: expected " + std::to_string(code.k) + " qubits");
  State s = code.n > code.k ? logical.tensor(State::zero_state(code.n - code.k)) : logical;
  s.apply_gates(code.encoder.gates());
  return s;
}

template <class State>
Syndrome extract_impl(State& state, const StabilizerCode& code, std::mt19937_64& rng,
                      std::optional<std::size_t> ancillas) {
  if (state.n_qubits() != code.n) throw SizeMismatch("extract_syndrome: register size mismatch");
  Syndrome s;
  const PauliString plain_ancilla(1);
  for (std::size_t j = 0; j < code.generators.size(); ++j) {
    if (ancillas && j >= *ancillas) throw AncillaExhausted("no fresh ancilla for generator " + std::to_string(j));
    s.push_back(encrypted_stabilizer_measurement(state, code.generators[j], plain_ancilla, rng).corrected);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------- codes

void StabilizerCode::validate() const {
  if (n == 0 || k == 0 || k > n) throw std::invalid_argument("code needs 0 < k <= n");
  if (generators.size() != n - k) throw std::invalid_argument("code needs n - k generators");
  if (logical_x.size() != k || logical_z.size() != k) throw std::invalid_argument("code needs k logical pairs");
  if (corrects.empty() || corrects.find_first_not_of("XYZ") != std::string::npos) {
    throw std::invalid_argument("corrects must be a subset of XYZ");
  }
  const StabilizerState group = group_of(*this);  // checks commuting, independent
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto* l : {&logical_x[i], &logical_z[i]}) {
      if (l->size() != n || !l->is_hermitian()) throw std::invalid_argument("logicals must be Hermitian on n qubits");
      for (const auto& g : generators) {
        if (!l->commutes(g)) throw std::invalid_argument("logical operator anticommutes with a generator");
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (logical_x[i].commutes(logical_z[j]) != (i != j)) throw std::invalid_argument("logical pairs malformed");
      if (!logical_x[i].commutes(logical_x[j]) || !logical_z[i].commutes(logical_z[j])) {
        throw std::invalid_argument("logical pairs malformed");
      }
    }
  }
  if (encoder.n_qubits() != n) throw std::invalid_argument("encoder size mismatch");
  for (std::size_t j = k; j < n; ++j) {
    if (!in_group(group, encoder.conjugate(PauliString::single(n, j, 'Z')))) {
      throw std::invalid_argument("encoder does not map ancilla Z onto the stabilizer group");
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!equal_mod_group(group, encoder.conjugate(PauliString::single(n, i, 'Z')), logical_z[i]) ||
        !equal_mod_group(group, encoder.conjugate(PauliString::single(n, i, 'X')), logical_x[i])) {
      throw std::invalid_argument("encoder does not map data X, Z onto the logicals");
    }
  }
}

StabilizerCode StabilizerCode::repetition() {
  return make_code("repetition", 3, 3, "X", {"ZZI", "IZZ"}, "XXX", "ZII",
                   {{GateKind::CNOT, 0, 1}, {GateKind::CNOT, 0, 2}});
}

StabilizerCode StabilizerCode::phase_flip() {
  return make_code("phase-flip", 3, 3, "Z", {"XXI", "IXX"}, "ZZZ", "XII",
                   {{GateKind::CNOT, 0, 1},
                    {GateKind::CNOT, 0, 2},
                    {GateKind::H, 0, 0},
                    {GateKind::H, 1, 0},
                    {GateKind::H, 2, 0}});
}

StabilizerCode StabilizerCode::steane() {
  return make_code("steane", 7, 3, "XYZ",
                   {"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"}, "XXXXXXX", "ZZZZZZZ", {});
}

StabilizerCode StabilizerCode::named(const std::string& name) {
  if (name == "repetition") return repetition();
  if (name == "phase-flip") return phase_flip();
  if (name == "steane") return steane();
  throw std::invalid_argument("unknown code '" + name + "'");
}

StabilizerCode StabilizerCode::parse(const std::string& text) {
  StabilizerCode c;
  std::string gates_text;
  bool have_n = false, have_k = false;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string rest;
    std::getline(ls >> std::ws, rest);
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("code file line " + std::to_string(lineno) + ": " + why);
    };
    auto number = [&]() -> std::size_t {
      if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) fail("expected a number");
      return std::stoul(rest);
    };
    try {
      if (key == "name") {
        c.name = rest;
      } else if (key == "n") {
        c.n = number();
        have_n = true;
      } else if (key == "k") {
        c.k = number();
        have_k = true;
      } else if (key == "d") {
        c.d = number();
      } else if (key == "corrects") {
        c.corrects = rest;
      } else if (key == "stabilizer") {
        c.generators.push_back(PauliString::parse(rest));
      } else if (key == "logical_x") {
        c.logical_x.push_back(PauliString::parse(rest));
      } else if (key == "logical_z") {
        c.logical_z.push_back(PauliString::parse(rest));
      } else if (key == "gate") {
        gates_text += rest + "\n";
      } else {
        fail("unknown directive '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).rfind("code file line", 0) == 0) throw;
      fail(e.what());
    }
  }
  if (!have_n || !have_k) throw std::invalid_argument("code file needs 'n' and 'k'");
  if (gates_text.empty()) {
    c.encoder = synthesize_encoder(c.n, c.generators, c.logical_x, c.logical_z);
  } else {
    const Circuit circ = Circuit::parse("QUBITS " + std::to_string(c.n) + "\n" + gates_text);
    if (!circ.clifford_only()) throw NotAllowed("encoder must be a Clifford gate list");
    c.encoder = CliffordOp::from_gates(c.n, circ.clifford_gates());
  }
  c.validate();
  return c;
}

std::string StabilizerCode::serialize() const {
  std::ostringstream out;
  if (!name.empty()) out << "name " << name << "\n";
  out << "n " << n << "\nk " << k << "\n";
  if (d) out << "d " << *d << "\n";
  out << "corrects " << corrects << "\n";
  for (const auto& g : generators) out << "stabilizer " << g.str() << "\n";
  for (const auto& l : logical_x) out << "logical_x " << l.str() << "\n";
  for (const auto& l : logical_z) out << "logical_z " << l.str() << "\n";
  for (const auto& g : encoder.gates()) {
    out << "gate " << gate_name(g.kind) << " " << g.q0;
    if (g.two_qubit()) out << " " << g.q1;
    out << "\n";
  }
  return out.str();
}

CliffordOp synthesize_encoder(std::size_t n, const std::vector<PauliString>& generators,
                              const std::vector<PauliString>& logical_x, const std::vector<PauliString>& logical_z) {
  const std::size_t k = logical_x.size();
  if (logical_z.size() != k || generators.size() + k != n) {
    throw std::invalid_argument("need n - k generators and k logical pairs");
  }
  std::vector<PauliString> destab;
  for (std::size_t j = 0; j < generators.size(); ++j) {
    std::vector<std::vector<std::uint8_t>> a;
    std::vector<std::uint8_t> rhs;
    for (std::size_t i = 0; i < generators.size(); ++i) {
      a.push_back(constraint_row(generators[i]));
      rhs.push_back(i == j);
    }
    for (std::size_t i = 0; i < k; ++i) {
      a.push_back(constraint_row(logical_x[i]));
      rhs.push_back(0);
      a.push_back(constraint_row(logical_z[i]));
      rhs.push_back(0);
    }
    for (const auto& d : destab) {
      a.push_back(constraint_row(d));
      rhs.push_back(0);
    }
    const auto v = solve_gf2(std::move(a), std::move(rhs));
    PauliString d(n);
    for (std::size_t q = 0; q < n; ++q) {
      d.set_x(q, v[q]);
      d.set_z(q, v[n + q]);
    }
    destab.push_back(d);
  }
  std::vector<PauliString> xs(logical_x.begin(), logical_x.end()), zs(logical_z.begin(), logical_z.end());
  xs.insert(xs.end(), destab.begin(), destab.end());
  zs.insert(zs.end(), generators.begin(), generators.end());
  return CliffordOp::from_images(xs, zs);
}

// ---------------------------------------------------------------- QEC

DensityMatrix encode(const StabilizerCode& code, const DensityMatrix& logical) { return encode_impl(code, logical); }
StabilizerState encode(const StabilizerCode& code, const StabilizerState& logical) {
  return encode_impl(code, logical);
}

Syndrome extract_syndrome(DensityMatrix& state, const StabilizerCode& code, std::mt19937_64& rng,
                          std::optional<std::size_t> ancillas) {
  return extract_impl(state, code, rng, ancillas);
}

Syndrome extract_syndrome(StabilizerState& state, const StabilizerCode& code, std::mt19937_64& rng,
                          std::optional<std::size_t> ancillas) {
  return extract_impl(state, code, rng, ancillas);
}

Syndrome syndrome_of(const StabilizerCode& code, const PauliString& error) {
  if (error.size() != code.n) throw SizeMismatch("error size does not match the code");
  Syndrome s;
  for (const auto& g : code.generators) s.push_back(g.commutes(error) ? 0 : 1);
  return s;
}

std::map<Syndrome, PauliString> decoding_table(const StabilizerCode& code) {
  std::map<Syndrome, PauliString> table;
  PauliString current(code.n);
  for (std::size_t w = 0; w <= code.correctable_weight(); ++w) enumerate_errors(code, w, 0, current, table);
  return table;
}

PauliString lookup_decode(const Syndrome& syndrome, const StabilizerCode& code) {
  if (syndrome.size() != code.generators.size()) throw SizeMismatch("syndrome length mismatch");
  const auto table = decoding_table(code);
  const auto it = table.find(syndrome);
  if (it == table.end()) throw Uncorrectable("syndrome outside the decoding table");
  return it->second;
}

PauliString logical_pauli(const StabilizerCode& code, const PauliString& logical) {
  if (logical.size() != code.k) throw SizeMismatch("logical Pauli size mismatch");
  PauliString acc(code.n);
  for (std::size_t i = 0; i < code.k; ++i) {
    if (logical.x(i)) acc *= code.logical_x[i];
    if (logical.z(i)) acc *= code.logical_z[i];
    if (logical.x(i) && logical.z(i)) acc.set_phase(static_cast<Phase>(acc.phase() + 1));  // Y = iXZ
  }
  acc.set_phase(static_cast<Phase>(acc.phase() + logical.phase()));
  return acc;
}

GateList logical_lift(const StabilizerCode& code, const GateList& logical) {
  const StabilizerState group = group_of(code);
  GateList out;
  for (const auto& g : logical) {
    if (g.q0 >= code.k || (g.two_qubit() && g.q1 >= code.k)) throw std::out_of_range("logical gate outside code");
    if (!g.clifford()) throw NotAllowed("only Clifford gates lift");
    if (g.kind == GateKind::X || g.kind == GateKind::Y || g.kind == GateKind::Z) {
      const char letter = g.kind == GateKind::X ? 'X' : g.kind == GateKind::Y ? 'Y' : 'Z';
      const auto ph = pauli_gates(logical_pauli(code, PauliString::single(code.k, g.q0, letter)));
      out.insert(out.end(), ph.begin(), ph.end());
      continue;
    }
    if (g.two_qubit() || code.k != 1) throw NotAllowed("no transversal lift for this gate");

    const CliffordOp want = CliffordOp::from_gates(1, {g});
    // Transversal g, then transversal g^3 (S^dagger for S).
    for (int power : {1, 3}) {
      GateList cand;
      for (std::size_t q = 0; q < code.n; ++q) {
        for (int p = 0; p < power; ++p) cand.push_back({g.kind, q, 0});
      }
      const CliffordOp phys = CliffordOp::from_gates(code.n, cand);
      bool ok = std::all_of(code.generators.begin(), code.generators.end(),
                            [&](const PauliString& s) { return in_group(group, phys.conjugate(s)); });
      ok = ok && equal_mod_group(group, phys.conjugate(code.logical_x[0]),
                                 logical_pauli(code, want.conjugate(PauliString::parse("X"))));
      ok = ok && equal_mod_group(group, phys.conjugate(code.logical_z[0]),
                                 logical_pauli(code, want.conjugate(PauliString::parse("Z"))));
      if (ok) {
        out.insert(out.end(), cand.begin(), cand.end());
        break;
      }
      if (power == 3) throw NotAllowed(std::string("gate ") + gate_name(g.kind) + " has no transversal lift");
    }
  }
  return out;
}

// ---------------------------------------------------------------- encrypted QEC

SchemePtr compose_with_stabilizer_code(const SchemePtr& data_scheme, const StabilizerCode& code) {
  if (data_scheme->plain_qubits() != code.k || data_scheme->cipher_qubits() != code.k) {
    throw SizeMismatch("data scheme must act in place on the k logical qubits");
  }
  if (!data_scheme->key_pauli(0) || !data_scheme->allows_all_cliffords()) {
    throw NotAllowed("data scheme must be a Pauli-frame scheme allowing Cliffords");
  }
  for (const auto& g : code.encoder.gates()) {
    if (!g.clifford()) throw NotAllowed("encoder must be Clifford");
  }
  if (code.n == code.k) return data_scheme;
  return compose_schemes({data_scheme, std::make_shared<TrivialScheme>(code.n - code.k)});
}

template <class State>
EncryptedQecRun<State> run_encrypted_qec(const Scheme& scheme, const StabilizerCode& code, Key key,
                                         const State& plain, const PauliString& error, std::mt19937_64& rng) {
  if (scheme.plain_qubits() != code.n || scheme.cipher_qubits() != code.n) {
    throw SizeMismatch("scheme must cover the whole code register");
  }
  if (plain.n_qubits() != code.k) throw SizeMismatch("plaintext must have k qubits");
  if (error.size() != code.n) throw SizeMismatch("error size does not match the code");
  const GateList enc = code.encoder.gates();
  const GateList dec = inverse_gates(enc);

  State reg = code.n > code.k ? plain.tensor(State::zero_state(code.n - code.k)) : plain;
  State cipher = encrypt(scheme, key, reg);
  cipher.apply_gates(scheme.lift(enc));
  cipher.apply_pauli(error);

  EncryptedQecRun<State> run{extract_syndrome(cipher, code, rng), PauliString(code.n), cipher};
  run.correction = lookup_decode(run.syndrome, code);
  cipher.apply_pauli(run.correction);
  cipher.apply_gates(scheme.lift(dec));

  // Everything the server ran, as a plaintext computation for the decryptor.
  GateList computation = enc;
  for (const PauliString* p : {&error, static_cast<const PauliString*>(&run.correction)}) {
    const auto g = pauli_gates(*p);
    computation.insert(computation.end(), g.begin(), g.end());
  }
  computation.insert(computation.end(), dec.begin(), dec.end());
  const State full = decrypt(scheme.decryption(key, computation), cipher);
  std::vector<std::size_t> data(code.k);
  for (std::size_t i = 0; i < code.k; ++i) data[i] = i;
  run.output = full.reduced(data);
  return run;
}

template EncryptedQecRun<DensityMatrix> run_encrypted_qec(const Scheme&, const StabilizerCode&, Key,
                                                          const DensityMatrix&, const PauliString&, std::mt19937_64&);
template EncryptedQecRun<StabilizerState> run_encrypted_qec(const Scheme&, const StabilizerCode&, Key,
                                                            const StabilizerState&, const PauliString&,
                                                            std::mt19937_64&);

}  // namespace qhe
