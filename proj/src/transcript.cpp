// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qhelab/transcript.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qhe {

const char* party_name(Party p) { return p == Party::Client ? "client" : "server"; }

const char* message_kind_name(MessageKind k) {
  return k == MessageKind::QuantumHandoff ? "quantum-handle" : "classical-bits";
}

void Transcript::handoff(Party sender, std::string label, std::size_t qubits) {
  messages_.push_back({sender, MessageKind::QuantumHandoff, std::move(label), {}, qubits});
}

void Transcript::classical(Party sender, std::string label, std::vector<int> bits) {
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("classical payload must be bits");
  }
  messages_.push_back({sender, MessageKind::ClassicalBits, std::move(label), std::move(bits), 0});
}

std::size_t Transcript::count(MessageKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(messages_.begin(), messages_.end(), [&](const Message& m) { return m.kind == kind; }));
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto& m : messages_) {
    nlohmann::json j{{"sender", party_name(m.sender)}, {"kind", message_kind_name(m.kind)}, {"label", m.label}};
    if (m.kind == MessageKind::ClassicalBits) {
      j["bits"] = m.bits;
    } else {
      j["qubits"] = m.qubits;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::from_jsonl(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const std::string sender = j.at("sender");
    if (sender != "client" && sender != "server") throw std::invalid_argument("unknown sender " + sender);
    const Party p = sender == "client" ? Party::Client : Party::Server;
    const std::string kind = j.at("kind");
    if (kind == "quantum-handle") {
      t.handoff(p, j.at("label"), j.at("qubits"));
    } else if (kind == "classical-bits") {
      t.classical(p, j.at("label"), j.at("bits").get<std::vector<int>>());
    } else {
      throw std::invalid_argument("unknown message kind " + kind);
    }
  }
  return t;
}

}  // namespace qhe
