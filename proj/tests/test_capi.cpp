// Copyright 2026 The qhelab Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <thread>

#include <json.hpp>

#include "qhelab/qhelab.h"

using nlohmann::json;

namespace {

json take(char* s) {
  REQUIRE(s != nullptr);
  const auto j = json::parse(s);
  qhe_string_free(s);
  return j;
}

}  // namespace

TEST_CASE("circuit handles") {
  qhe_circuit* c = nullptr;
  REQUIRE(qhe_circuit_parse("QUBITS 2\nH 0\nT 1\n", &c) == QHE_OK);
  CHECK(qhe_circuit_qubits(c) == 2);
  CHECK(qhe_circuit_t_count(c) == 1);
  char* text = nullptr;
  REQUIRE(qhe_circuit_serialize(c, &text) == QHE_OK);
  CHECK(std::string(text) == "QUBITS 2\nH 0\nT 1\n");
  qhe_string_free(text);
  qhe_circuit_free(c);

  c = nullptr;
  CHECK(qhe_circuit_parse("H 0\nROT 1\n", &c) == QHE_ERR_PARSE);
  CHECK(c == nullptr);
  CHECK(std::string(qhe_last_error()).find("line 2") != std::string::npos);
  CHECK(qhe_circuit_load("/nonexistent/file.qc", &c) != QHE_OK);
  CHECK(qhe_circuit_parse(nullptr, &c) == QHE_ERR_INVALID);
  qhe_circuit_free(nullptr);
  CHECK(qhe_circuit_qubits(nullptr) == 0);
}

TEST_CASE("last error is per thread and cleared on success") {
  qhe_circuit* c = nullptr;
  CHECK(qhe_circuit_parse("BAD\n", &c) == QHE_ERR_PARSE);
  std::string other;
  std::thread t([&] { other = qhe_last_error(); });
  t.join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(qhe_last_error()).empty());
  REQUIRE(qhe_circuit_parse("H 0\n", &c) == QHE_OK);
  CHECK(std::string(qhe_last_error()).empty());
  qhe_circuit_free(c);
  CHECK(std::string(qhe_status_name(QHE_ERR_ORACLE_CAP)) == "oracle cap exceeded");
}

TEST_CASE("roundtrip") {
  qhe_circuit* c = nullptr;
  REQUIRE(qhe_circuit_parse("H 0\n", &c) == QHE_OK);
  char* rep = nullptr;
  REQUIRE(qhe_roundtrip("pauli", 0, c, "0", 1, &rep) == QHE_OK);
  auto j = take(rep);
  CHECK(j["distance"].get<double>() == 0.0);
  CHECK(j["transcript"].size() == 2);

  REQUIRE(qhe_roundtrip("perm", 5, c, "+", 1, &rep) == QHE_OK);
  j = take(rep);
  CHECK(j["distance"].get<double>() < 1e-10);
  CHECK(j["backend"] == "tableau");

  CHECK(qhe_roundtrip("rsa", 1, c, "0", 1, &rep) == QHE_ERR_INVALID);
  CHECK(qhe_roundtrip("pauli", 1, c, "q", 1, &rep) == QHE_ERR_INVALID);
  qhe_circuit_free(c);

  REQUIRE(qhe_circuit_parse("H 3\n", &c) == QHE_OK);
  CHECK(qhe_roundtrip("pauli", 1, c, "0", 1, &rep) == QHE_ERR_INVALID);
  qhe_circuit_free(c);
}

TEST_CASE("security") {
  char* rep = nullptr;
  REQUIRE(qhe_security("pauli", 0, 0, "0;+", 0, 1, 1, &rep) == QHE_OK);
  CHECK(take(rep)["delta"].get<double>() < 1e-12);
  REQUIRE(qhe_security("perm", 1, 1, "0;1", 0, 1, 1, &rep) == QHE_OK);
  const auto j = take(rep);
  CHECK(j["delta"].get<double>() <= j["bound"].get<double>());
  CHECK(j["bound"].get<double>() == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(qhe_security("pauli", 0, 0, "0000000000;1111111111", 0, 1, 1, &rep) == QHE_ERR_ORACLE_CAP);
  CHECK(std::string(qhe_last_error()).find("oracle cap exceeded") != std::string::npos);
  CHECK(qhe_security("pauli", 0, 0, "0", 0, 1, 1, &rep) == QHE_ERR_INVALID);
}

TEST_CASE("qec demo, t-gate and cv-check") {
  char* rep = nullptr;
  REQUIRE(qhe_qec_demo("steane", "+", "all", 3, &rep) == QHE_OK);
  auto j = take(rep);
  CHECK(j["all_recovered"] == true);
  CHECK(j["runs"].size() == 22);
  CHECK(qhe_qec_demo("golay", "0", "all", 3, &rep) == QHE_ERR_INVALID);

  REQUIRE(qhe_t_gate("deterministic", 1, "+", 5, 1, &rep) == QHE_OK);
  j = take(rep);
  CHECK(j["pass"] == true);
  CHECK(j["successes"] == 5);
  CHECK(qhe_t_gate("deterministic", 2, "+", 5, 1, &rep) == QHE_ERR_INVALID);

  REQUIRE(qhe_cv_check(10, 1, 1e-10, &rep) == QHE_OK);
  CHECK(take(rep)["pass"] == true);
}

TEST_CASE("resources") {
  char* out = nullptr;
  REQUIRE(qhe_resources(R"({"fig5": true})", "1e6,1e8,1e10", "json", &out) == QHE_OK);
  const auto j = take(out);
  REQUIRE(j.size() == 3);
  for (const auto& row : j) {
    CHECK(row["t"] == 11);
    CHECK(row["n"] == 529);
  }
  REQUIRE(qhe_resources(R"({"fig5": true})", "1e22", "csv", &out) == QHE_OK);
  CHECK(std::string(out).find("10000000000000000000000,10,11,529,430140480,") != std::string::npos);
  qhe_string_free(out);
  CHECK(qhe_resources(R"({"p0": 1e-3, "p_threshold": 1e-3})", "1e6", "csv", &out) == QHE_ERR_INVALID);
  CHECK(std::string(qhe_last_error()).find("convergence") != std::string::npos);
  CHECK(qhe_resources("{", "", "csv", &out) == QHE_ERR_PARSE);
  CHECK(qhe_resources("{}", "1.5", "csv", &out) == QHE_ERR_INVALID);
}

TEST_CASE("audit") {
  char* rep = nullptr;
  const char* canary =
      R"({"scheme": "pauli", "circuit_text": "M 0 -> b\n", "plaintexts": ["0", "1"], "seed": 1, "leak_key": true})";
  REQUIRE(qhe_audit(canary, ".", 2, &rep) == QHE_OK);
  CHECK(take(rep)["max_tv"].get<double>() > 0.99);
  const char* few = R"({"scheme": "pauli", "circuit_text": "H 0\n", "samples": 10})";
  CHECK(qhe_audit(few, ".", 1, &rep) == QHE_ERR_INVALID);
  CHECK(std::string(qhe_last_error()).find("at least 1000") != std::string::npos);
}
