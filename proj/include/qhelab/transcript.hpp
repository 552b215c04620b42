// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace qhe {

enum class Party { Client, Server };
enum class MessageKind { QuantumHandoff, ClassicalBits };

const char* party_name(Party p);
const char* message_kind_name(MessageKind k);

/// One message on the client/server channel. Classical payloads are plain
/// bits; quantum hand-offs carry a register label and qubit count only.
struct Message {
  Party sender;
  MessageKind kind;
  std::string label;
  std::vector<int> bits;   // classical payload
  std::size_t qubits = 0;  // quantum hand-off size

  friend bool operator==(const Message&, const Message&) = default;
};

/// Append-only message log.
class Transcript {
 public:
  void handoff(Party sender, std::string label, std::size_t qubits);
  void classical(Party sender, std::string label, std::vector<int> bits);

  const std::vector<Message>& messages() const { return messages_; }
  std::size_t count(MessageKind kind) const;

  /// One JSON object per line: {"sender","kind","label","bits"|"qubits"}.
  std::string to_jsonl() const;
  static Transcript from_jsonl(const std::string& text);

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<Message> messages_;
};

}  // namespace qhe
