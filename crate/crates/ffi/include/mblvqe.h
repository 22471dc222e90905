/* C API for the mblvqe statevector simulator.
 *
 * Conventions:
 *   - Every fallible call returns mblvqe_status; MBLVQE_OK is 0.
 *   - On failure, mblvqe_last_error_message() returns a thread-local,
 *     NUL-terminated message, valid until the next failing call on the
 *     same thread.
 *   - *_new constructors hand ownership to the caller; release handles
 *     with the matching *_free (null is accepted).
 *   - Qubit 0 is the least significant bit of a basis index. Rotation
 *     gates follow the half-angle convention exp(-i theta P / 2).
 *
 * Maintained by hand (no cbindgen); tests/header_sync.rs checks that every
 * exported symbol is declared here.
 */

#ifndef MBLVQE_H
#define MBLVQE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mblvqe_status {
  MBLVQE_OK = 0,
  MBLVQE_NULL_POINTER = 1,
  MBLVQE_CONTRACT_VIOLATION = 2,
  MBLVQE_RESOURCE_CAP = 3,
  MBLVQE_CONFIG_ERROR = 4,
  MBLVQE_NON_FINITE = 5,
  MBLVQE_PANIC = 6,
} mblvqe_status;

/* Opaque handles. */
typedef struct mblvqe_state mblvqe_state;
typedef struct mblvqe_circuit mblvqe_circuit;
typedef struct mblvqe_hamiltonian mblvqe_hamiltonian;

/* Sampling intervals (radians) for couplings J, fields h, kick angles g.
 * low == high pins the value. */
typedef struct mblvqe_regime {
  double g_low;
  double g_high;
  double j_low;
  double j_high;
  double h_low;
  double h_high;
} mblvqe_regime;

/* Library version as a static string. */
const char *mblvqe_version(void);

/* Message of the most recent failure on this thread (never null). */
const char *mblvqe_last_error_message(void);

/* Built-in regimes: paramagnetic MBL at g = 0.1 pi, the (0, 0.2 pi] window,
 * thermalizing g = 0.5 pi, time-crystal MBL at g = 0.9 pi, and the
 * [0.84 pi, pi) window. J is drawn from [-1.5 pi, -0.5 pi] and h from
 * [-pi, pi] in all of them. */
mblvqe_regime mblvqe_regime_pm(void);
mblvqe_regime mblvqe_regime_pm_window(void);
mblvqe_regime mblvqe_regime_thermal(void);
mblvqe_regime mblvqe_regime_dtc(void);
mblvqe_regime mblvqe_regime_dtc_window(void);

/* Pin the kick angle to a single value (radians). */
void mblvqe_regime_set_g_point(mblvqe_regime *regime, double g);

/* --- States ------------------------------------------------------------ */

/* Allocate |0...0> on num_qubits qubits (capped at 20). */
mblvqe_status mblvqe_state_new_zero(size_t num_qubits, mblvqe_state **out);
void mblvqe_state_free(mblvqe_state *state);
size_t mblvqe_state_num_qubits(const mblvqe_state *state);
mblvqe_status mblvqe_state_norm(const mblvqe_state *state, double *out);
mblvqe_status mblvqe_state_amplitude(const mblvqe_state *state, uint64_t index,
                                     double *re, double *im);

/* Bipartite von Neumann entropy in bits across qubits [0, cut) | [cut, N). */
mblvqe_status mblvqe_state_entropy(const mblvqe_state *state, size_t cut,
                                   double *bits);

/* --- Circuits and parameters ------------------------------------------- */

/* Kicked-Ising MBL circuit: depth_blocks blocks of RZZ on adjacent pairs
 * (slot scale 2), RZ per site, RX kicks per site; (3N - 1) slots per block
 * ordered J bonds, h sites, g sites. */
mblvqe_status mblvqe_circuit_mbl(size_t num_qubits, size_t depth_blocks,
                                 mblvqe_circuit **out);

/* Hardware-efficient baseline: depth_layers layers of single-qubit
 * rotations with axes fixed by axis_seed, then a CNOT ladder. */
mblvqe_status mblvqe_circuit_hea(size_t num_qubits, size_t depth_layers,
                                 uint64_t axis_seed, mblvqe_circuit **out);

void mblvqe_circuit_free(mblvqe_circuit *circuit);
size_t mblvqe_circuit_num_params(const mblvqe_circuit *circuit);
size_t mblvqe_circuit_num_gates(const mblvqe_circuit *circuit);

/* Draw MBL parameters into out_params (out_len must equal
 * depth_blocks * (3 * num_qubits - 1)). tied != 0 copies block 0's draw to
 * every block (one Floquet period repeated). Deterministic in seed. */
mblvqe_status mblvqe_sample_mbl_params(size_t num_qubits, size_t depth_blocks,
                                       const mblvqe_regime *regime,
                                       uint64_t seed, int tied,
                                       double *out_params, size_t out_len);

/* Draw HEA parameters, i.i.d. uniform over [0, 2 pi). */
mblvqe_status mblvqe_sample_hea_params(size_t num_slots, uint64_t seed,
                                       double *out_params, size_t out_len);

/* Apply the circuit to the state in place. */
mblvqe_status mblvqe_circuit_apply(const mblvqe_circuit *circuit,
                                   const double *params, size_t params_len,
                                   mblvqe_state *state);

/* --- Hamiltonians and measurements -------------------------------------- */

/* Open XXZ chain: H = -J sum_i (X_i X_{i+1} + Y_i Y_{i+1})
 *                     + Delta sum_i Z_i Z_{i+1}. */
mblvqe_status mblvqe_xxz_new(size_t num_qubits, double j, double delta,
                             mblvqe_hamiltonian **out);
void mblvqe_hamiltonian_free(mblvqe_hamiltonian *hamiltonian);

/* <psi|H|psi>. */
mblvqe_status mblvqe_expectation(const mblvqe_hamiltonian *hamiltonian,
                                 const mblvqe_state *state, double *out);

/* Smallest eigenvalue of H (capped at 12 qubits). */
mblvqe_status mblvqe_exact_ground_energy(const mblvqe_hamiltonian *hamiltonian,
                                         double *out);

/* Energy and full analytic gradient of <0|U^dag(theta) H U(theta)|0> via
 * adjoint differentiation; grad_len must equal the circuit's slot count. */
mblvqe_status mblvqe_adjoint_gradient(const mblvqe_circuit *circuit,
                                      const double *params, size_t params_len,
                                      const mblvqe_hamiltonian *hamiltonian,
                                      double *energy_out, double *grad_out,
                                      size_t grad_len);

/* Exact X-X out-of-time-ordered correlator
 * (1/2^N) Tr[U^dag X_i U X_j U^dag X_i U X_j] (capped at 12 qubits). */
mblvqe_status mblvqe_otoc_exact_xx(const mblvqe_circuit *circuit,
                                   const double *params, size_t params_len,
                                   size_t site_i, size_t site_j, double *out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MBLVQE_H */
