// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace qhe {

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::SWAP: return "SWAP";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::T: return "T";
    case GateKind::TDG: return "TDG";
  }
  return "?";
}

std::vector<Gate> inverse_gates(const std::vector<Gate>& gates) {
  std::vector<Gate> out;
  out.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    switch (it->kind) {
      case GateKind::S:
        out.insert(out.end(), 3, *it);
        break;
      case GateKind::T:
        out.push_back({GateKind::TDG, it->q0, it->q1});
        break;
      case GateKind::TDG:
        out.push_back({GateKind::T, it->q0, it->q1});
        break;
      default:
        out.push_back(*it);
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected qubit index, got '" + std::string(tok) + "'");
  }
  return v;
}

bool parse_gate_kind(std::string_view name, GateKind& kind) {
  static constexpr std::pair<std::string_view, GateKind> kNames[] = {
      {"H", GateKind::H},     {"S", GateKind::S},   {"CNOT", GateKind::CNOT},
      {"CZ", GateKind::CZ},   {"SWAP", GateKind::SWAP}, {"X", GateKind::X},
      {"Y", GateKind::Y},     {"Z", GateKind::Z}};
  for (const auto& [n, k] : kNames) {
    if (n == name) {
      kind = k;
      return true;
    }
  }
  return false;
}

}  // namespace

Circuit Circuit::parse(std::string_view text) {
  Circuit c;
  std::set<std::string> labels;
  std::size_t max_q = 0;
  bool any_q = false;
  auto note_q = [&](std::size_t q) {
    max_q = std::max(max_q, q);
    any_q = true;
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto toks = split_ws(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (toks[0].front() == '#') {
      c.elements_.push_back(Comment{std::string(line)});
      continue;
    }
    const std::string_view op = toks[0];
    GateKind kind{};
    if (op == "QUBITS") {
      if (toks.size() != 2 || !c.elements_.empty() || c.explicit_size_) {
        throw ParseError(line_no, "QUBITS must be the first statement and take one argument");
      }
      c.n_ = parse_index(toks[1], line_no);
      if (c.n_ == 0) throw ParseError(line_no, "register must have at least one qubit");
      c.explicit_size_ = true;
    } else if (parse_gate_kind(op, kind)) {
      Gate g{kind, 0, 0};
      const std::size_t want = g.two_qubit() ? 3 : 2;
      if (toks.size() != want) throw ParseError(line_no, "wrong operand count for " + std::string(op));
      g.q0 = parse_index(toks[1], line_no);
      note_q(g.q0);
      if (g.two_qubit()) {
        g.q1 = parse_index(toks[2], line_no);
        note_q(g.q1);
        if (g.q0 == g.q1) throw ParseError(line_no, "two-qubit gate on a single qubit");
      }
      c.elements_.push_back(g);
    } else if (op == "T") {
      if (toks.size() != 2) throw ParseError(line_no, "T takes one qubit");
      TMarker t{parse_index(toks[1], line_no)};
      note_q(t.qubit);
      c.elements_.push_back(t);
    } else if (op == "M") {
      if (toks.size() != 4 || toks[2] != "->") throw ParseError(line_no, "expected 'M q -> bit'");
      MeasureMarker m{parse_index(toks[1], line_no), std::string(toks[3])};
      if (!labels.insert(m.bit).second) throw ParseError(line_no, "duplicate bit label " + m.bit);
      note_q(m.qubit);
      c.elements_.push_back(std::move(m));
    } else if (op == "CPAULI") {
      if (toks.size() != 4 || toks[2].size() != 1) throw ParseError(line_no, "expected 'CPAULI bit P q'");
      ClassicalPauli cp{std::string(toks[1]), toks[2][0], parse_index(toks[3], line_no)};
      if (cp.pauli != 'X' && cp.pauli != 'Y' && cp.pauli != 'Z') {
        throw ParseError(line_no, "CPAULI Pauli must be X, Y or Z");
      }
      if (!labels.contains(cp.bit)) throw ParseError(line_no, "unknown bit label " + cp.bit);
      note_q(cp.qubit);
      c.elements_.push_back(std::move(cp));
    } else {
      throw ParseError(line_no, "unknown operation '" + std::string(op) + "'");
    }
    if (end == text.size()) break;
  }

  if (c.explicit_size_) {
    if (any_q && max_q >= c.n_) throw ParseError(line_no, "qubit index exceeds QUBITS");
  } else {
    c.n_ = any_q ? max_q + 1 : 0;
  }
  return c;
}

Circuit Circuit::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open circuit file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Circuit::serialize() const {
  std::ostringstream out;
  if (explicit_size_) out << "QUBITS " << n_ << '\n';
  for (const auto& el : elements_) {
    if (const auto* g = std::get_if<Gate>(&el)) {
      out << gate_name(g->kind) << ' ' << g->q0;
      if (g->two_qubit()) out << ' ' << g->q1;
    } else if (const auto* t = std::get_if<TMarker>(&el)) {
      out << "T " << t->qubit;
    } else if (const auto* m = std::get_if<MeasureMarker>(&el)) {
      out << "M " << m->qubit << " -> " << m->bit;
    } else if (const auto* cp = std::get_if<ClassicalPauli>(&el)) {
      out << "CPAULI " << cp->bit << ' ' << cp->pauli << ' ' << cp->qubit;
    } else {
      out << std::get<Comment>(el).text;
    }
    out << '\n';
  }
  return out.str();
}

void Circuit::check_qubit(std::size_t q) const {
  if (q >= n_) throw std::out_of_range("qubit " + std::to_string(q) + " outside register");
}

void Circuit::add_gate(GateKind kind, std::size_t q0, std::size_t q1) {
  Gate g{kind, q0, q1};
  if (!g.clifford()) throw std::invalid_argument("use add_t for T gates");
  check_qubit(q0);
  if (g.two_qubit()) {
    check_qubit(q1);
    if (q0 == q1) throw std::invalid_argument("two-qubit gate on a single qubit");
  } else {
    g.q1 = 0;
  }
  explicit_size_ = true;
  elements_.push_back(g);
}

void Circuit::add_t(std::size_t qubit) {
  check_qubit(qubit);
  explicit_size_ = true;
  elements_.push_back(TMarker{qubit});
}

void Circuit::add_measure(std::size_t qubit, std::string bit) {
  check_qubit(qubit);
  for (const auto& el : elements_) {
    if (const auto* m = std::get_if<MeasureMarker>(&el); m && m->bit == bit) {
      throw std::invalid_argument("duplicate bit label " + bit);
    }
  }
  explicit_size_ = true;
  elements_.push_back(MeasureMarker{qubit, std::move(bit)});
}

void Circuit::add_classical_pauli(std::string bit, char pauli, std::size_t qubit) {
  check_qubit(qubit);
  explicit_size_ = true;
  elements_.push_back(ClassicalPauli{std::move(bit), pauli, qubit});
}

void Circuit::add_comment(std::string text) {
  if (text.empty() || text.front() != '#') text.insert(0, "# ");
  elements_.push_back(Comment{std::move(text)});
}

bool Circuit::clifford_only() const {
  return std::all_of(elements_.begin(), elements_.end(), [](const CircuitElement& el) {
    return std::holds_alternative<Gate>(el) || std::holds_alternative<Comment>(el);
  });
}

bool Circuit::has_measurements() const {
  return std::any_of(elements_.begin(), elements_.end(), [](const CircuitElement& el) {
    return std::holds_alternative<MeasureMarker>(el);
  });
}

std::size_t Circuit::t_count() const {
  return static_cast<std::size_t>(std::count_if(elements_.begin(), elements_.end(), [](const CircuitElement& el) {
    return std::holds_alternative<TMarker>(el);
  }));
}

std::vector<Gate> Circuit::clifford_gates() const {
  std::vector<Gate> out;
  for (const auto& el : elements_) {
    if (const auto* g = std::get_if<Gate>(&el)) {
      out.push_back(*g);
    } else if (!std::holds_alternative<Comment>(el)) {
      throw std::invalid_argument("circuit contains non-Clifford elements");
    }
  }
  return out;
}

}  // namespace qhe
