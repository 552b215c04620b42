/* Copyright 2026 The qhelab Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the qhelab library. Every call returns a qhe_status; on
 * failure qhe_last_error() describes the error for the calling thread.
 * Strings returned through char** are owned by the caller and released
 * with qhe_string_free. Reports are JSON unless stated otherwise.
 */

#ifndef QHELAB_QHELAB_H_
#define QHELAB_QHELAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QHE_API __declspec(dllexport)
#else
#define QHE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qhe_status {
  QHE_OK = 0,
  QHE_ERR_PARSE = 1,       /* malformed circuit, code, config or number */
  QHE_ERR_INVALID = 2,     /* bad argument or scheme/circuit mismatch */
  QHE_ERR_ORACLE_CAP = 3,  /* dense simulation above the qubit cap */
  QHE_ERR_PROTOCOL = 4,    /* client/server protocol violation */
  QHE_ERR_INFEASIBLE = 5,  /* resource budget cannot be met */
  QHE_ERR_INTERNAL = 99
} qhe_status;

typedef struct qhe_circuit qhe_circuit;

QHE_API const char* qhe_version(void);
/* Message of the last failed call on this thread, "" if none. */
QHE_API const char* qhe_last_error(void);
QHE_API const char* qhe_status_name(qhe_status status);
QHE_API void qhe_string_free(char* s);

/* Circuits in the text format (H, S, X, Y, Z, CNOT, CZ, SWAP, T, M, CPAULI). */
QHE_API qhe_status qhe_circuit_parse(const char* text, qhe_circuit** out);
QHE_API qhe_status qhe_circuit_load(const char* path, qhe_circuit** out);
QHE_API void qhe_circuit_free(qhe_circuit* c);
QHE_API qhe_status qhe_circuit_serialize(const qhe_circuit* c, char** out);
QHE_API size_t qhe_circuit_qubits(const qhe_circuit* c);
QHE_API size_t qhe_circuit_t_count(const qhe_circuit* c);

/* One client/server session; scheme is "pauli" or "perm" (m ignored for
 * pauli). Plaintext is a product of 0 1 + - +i -i T. The report holds the
 * trace distance to plain evaluation and the transcript. */
QHE_API qhe_status qhe_roundtrip(const char* scheme, unsigned m, const qhe_circuit* circuit, const char* plaintext,
                                 uint64_t seed, char** report);

/* Maximal trace distance between encrypted inputs. scheme is "pauli",
 * "phase" or "perm" (m columns per half, `rows` data rows). inputs is a
 * ';'-separated list of plaintexts. samples = 0 uses the default sample
 * count when the key space is too large to sweep. */
QHE_API qhe_status qhe_security(const char* scheme, unsigned m, unsigned rows, const char* inputs, size_t samples,
                                uint64_t seed, unsigned jobs, char** report);

/* Encrypted QEC walkthrough. code is "repetition", "phase-flip", "steane"
 * or the text of a code file. error is a Pauli string, or "all" for every
 * correctable single-qubit error. */
QHE_API qhe_status qhe_qec_demo(const char* code, const char* plaintext, const char* error, uint64_t seed,
                                char** report);

/* T-gate demo. variant is "deterministic", "probabilistic" (permutation
 * key, m columns) or "pauli" (magic-state injection). The report includes
 * the first session's transcript. */
QHE_API qhe_status qhe_t_gate(const char* variant, unsigned m, const char* plaintext, size_t trials, uint64_t seed,
                              char** report);

/* Random Gaussian-circuit identity suite. */
QHE_API qhe_status qhe_cv_check(size_t trials, uint64_t seed, double tol, char** report);

/* Resource tradeoff sweep. params is a JSON object with any of p0,
 * p_threshold, a_coeff, p_target, depth, k (null for the m-constraint
 * rule), s, fig5 (true loads the preset first). grid is a ','-separated
 * list of N_tot values ("1e22", "5000"); NULL or "" uses the preset grid.
 * format is "json" or "csv". */
QHE_API qhe_status qhe_resources(const char* params, const char* grid, const char* format, char** table);

/* Transcript audit from a session config (JSON). base_dir resolves
 * relative circuit paths. */
QHE_API qhe_status qhe_audit(const char* config, const char* base_dir, unsigned jobs, char** report);

#ifdef __cplusplus
}
#endif

#endif /* QHELAB_QHELAB_H_ */
