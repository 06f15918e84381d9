#ifndef ENTANGLAB_H
#define ENTANGLAB_H

/* Generated by cbindgen from entanglab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes of every fallible call.
typedef enum {
  ENTANGLAB_STATUS_OK = 0,
  // A required pointer argument was null.
  ENTANGLAB_STATUS_NULL_POINTER = 1,
  // Arguments violated a documented precondition.
  ENTANGLAB_STATUS_INVALID_ARGUMENT = 2,
  // The computation failed numerically (degeneracy, no convergence,
  // vanishing probe current, ...).
  ENTANGLAB_STATUS_NUMERICAL = 3,
} EntanglabStatus;

// Probe character selector.
typedef enum {
  // Extracts electrons; observable is the occupation `n`.
  ENTANGLAB_CHARACTER_PARTICLE = 0,
  // Injects electrons; observable is `1 - n`.
  ENTANGLAB_CHARACTER_HOLE = 1,
} EntanglabCharacter;

// Opaque model handle.
typedef struct EntanglabModel EntanglabModel;

// Resonant-level probe description.
typedef struct {
  // Level energy relative to the chemical potential.
  double energy;
  // Filter width; must be positive.
  double width;
  // Contact site (mode index for occupation probes).
  uint32_t site;
  // Tunneling amplitude, used by the resonant-level realization.
  double coupling;
  EntanglabCharacter character;
} EntanglabProbe;

// Correlator output: the normalized covariance of the two probe
// observables and, when the correlator is non-negative, the two-state
// decomposition entropy in nats.
typedef struct {
  double alpha;
  double mean0;
  double mean1;
  double covariance;
  double entanglement;
  // Nonzero when `entanglement` is populated (alpha >= 0).
  bool has_entanglement;
} EntanglabAlpha;

// Analytic solution of one pairing block.
typedef struct {
  double u_sq;
  double v_sq;
  double alpha;
} EntanglabBcs;

// Open-dot closed-form outputs.
typedef struct {
  double gamma_bar;
  double alpha_interaction;
  double alpha_statistical;
  double entanglement;
  bool validity;
} EntanglabOpenDot;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Open tight-binding chain. Returns null on invalid parameters.
EntanglabModel *entanglab_model_free_chain(uint32_t sites, double hopping);

// Chain with nearest-neighbor density-density repulsion.
EntanglabModel *entanglab_model_interacting_chain(uint32_t sites,
                                                  double hopping,
                                                  double interaction);

// Independent two-mode pairing blocks from parallel `xi`/`delta` arrays.
//
// # Safety
// `xis` and `deltas` must point to `pairs` readable doubles each.
EntanglabModel *entanglab_model_pairing_toy(const double *xis,
                                            const double *deltas,
                                            uintptr_t pairs);

// Normal chain tunnel-coupled to a paired segment.
EntanglabModel *entanglab_model_proximity_chain(uint32_t normal_sites,
                                                uint32_t sc_sites,
                                                double hopping,
                                                double pairing_gap,
                                                double tunneling);

// Release a model handle. Null is ignored.
//
// # Safety
// `model` must be a pointer previously returned by a constructor and not
// yet released.
void entanglab_model_release(EntanglabModel *model);

// Total fermionic mode count of a model; zero for null handles.
//
// # Safety
// `model` must be a live handle or null.
uint32_t entanglab_model_mode_count(const EntanglabModel *model);

// Lowest eigenvalue of the model. `sector` fixes the particle number for
// number-conserving models; pass -1 for the whole space.
//
// # Safety
// `model` must be a live handle; `out_energy` must point to a writable
// double.
EntanglabStatus entanglab_ground_energy(const EntanglabModel *model,
                                        int64_t sector,
                                        double *out_energy);

// Occupation correlator of two probes resolved to eigenmodes by energy
// (site as tie-break), evaluated in the model's ground state. `sector`
// as in [`entanglab_ground_energy`]; `select_tol` bounds the
// energy-to-mode resolution window.
//
// # Safety
// `model` must be a live handle; `out` must point to writable storage.
EntanglabStatus entanglab_alpha_mode(const EntanglabModel *model,
                                     EntanglabProbe probe0,
                                     EntanglabProbe probe1,
                                     int64_t sector,
                                     double select_tol,
                                     EntanglabAlpha *out);

// Resonant-level correlator: the probes become real levels coupled to the
// model with their `coupling` amplitudes and the correlator of the level
// occupations is extrapolated to vanishing coupling.
//
// # Safety
// `model` must be a live handle; `out` must point to writable storage.
EntanglabStatus entanglab_alpha_probe_level(const EntanglabModel *model,
                                            EntanglabProbe probe0,
                                            EntanglabProbe probe1,
                                            EntanglabAlpha *out);

// Two-state decomposition entropy in nats for a non-negative weight ratio.
//
// # Safety
// `out` must point to a writable double.
EntanglabStatus entanglab_e1_closed_form(double alpha, double *out);

// Analytic single-block pairing solution.
//
// # Safety
// `out` must point to writable storage.
EntanglabStatus entanglab_bcs_uv(double xi, double delta, EntanglabBcs *out);

// Open-dot closed form: harmonic-mean width, interaction-induced and
// statistical correlators, leading-order entanglement and the dominance
// flag.
//
// # Safety
// `out` must point to writable storage.
EntanglabStatus entanglab_open_dot(uint32_t channels,
                                   double gamma0,
                                   double gamma1,
                                   double eps0,
                                   double eps1,
                                   EntanglabOpenDot *out);

// Copy the calling thread's last error message into `buffer` (NUL
// terminated, truncated to `capacity`). Returns the full message length
// in bytes, not counting the terminator.
//
// # Safety
// `buffer` must point to `capacity` writable bytes, or be null (then only
// the length is returned).
uintptr_t entanglab_last_error(char *buffer, uintptr_t capacity);

// Static library version string.
const char *entanglab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTANGLAB_H */
