#ifndef EXTSSH_H
#define EXTSSH_H

/* C interface to the extended-SSH waveguide-QED simulator.
 *
 * All functions return essh_status; on ESSH_ERR_* the thread-local message
 * from essh_last_error() describes the failure.  Energies are in units of
 * the common nearest-neighbour hopping J, times in 1/J.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum essh_status {
  ESSH_OK = 0,
  ESSH_ERR_INVALID_ARGUMENT = 1,
  ESSH_ERR_GAPLESS = 2,
  ESSH_ERR_DOMAIN = 3,   /* chirality/sqrt/root-domain violations */
  ESSH_ERR_NOT_FOUND = 4,/* no pole / in-gap state / edge state / VHS */
  ESSH_ERR_CONFIG = 5,
  ESSH_ERR_IO = 6,
  ESSH_ERR_INTERNAL = 7
} essh_status;

typedef struct essh_model {
  double j1;          /* odd-bond nearest-neighbour hopping */
  double j1p;         /* intra-cell nearest-neighbour hopping */
  double j3;          /* third-neighbour hopping (B -> A two cells on) */
  double j3p;         /* staggered third-neighbour partner */
  double omega_c;     /* reference frequency (bookkeeping only) */
  double omega_delta; /* staggered on-site detuning; 0 keeps chirality */
} essh_model;

const char* essh_version(void);

/* empty string when the calling thread has seen no error */
const char* essh_last_error(void);

/* upper-band frequency at Bloch momentum k */
essh_status essh_dispersion(const essh_model* m, double k, double* omega_out);

essh_status essh_winding(const essh_model* m, int* w_out);

/* full middle-gap width, 2*min_k omega(k) */
essh_status essh_gap(const essh_model* m, double* gap_out);

/* in-band critical (Van Hove) energies; writes at most cap values */
essh_status essh_vhs(const essh_model* m, double* out, int cap, int* n_out);

/* emitter self-energy Sigma_e(z) for coupling g */
essh_status essh_self_energy(const essh_model* m, double re_z, double im_z,
                             double g, double* re_out, double* im_out);

/* bound-state pole in the middle gap: E - Delta - Sigma_e(E) = 0 */
essh_status essh_solve_pole(const essh_model* m, double delta, double g,
                            double* e_out);

/* open chain of n_cells unit cells (2*n_cells sites) */
typedef struct essh_chain essh_chain;
essh_status essh_chain_create(const essh_model* m, int n_cells,
                              essh_chain** chain_out);
void essh_chain_destroy(essh_chain* chain);
essh_status essh_chain_dim(const essh_chain* chain, int* dim_out);

/* in-gap dressed state of chain + one local emitter (detuning delta,
 * coupling g at the given site); energy and emitter amplitude */
essh_status essh_bound_state(const essh_chain* chain, double delta, int site,
                             double g, double* energy_out, double* c_e_out);

/* drive-tone solution for the six-cavity Floquet window; targets taken from
 * (j1, j1p, j3, j3p) of the model */
essh_status essh_solve_tones(double delta, double delta1, double delta2,
                             const essh_model* targets, double omegas_out[6],
                             double amps_out[6]);

/* full config-driven runner (same subcommands as the CLI).  summary_out
 * receives a JSON document to release with essh_string_free; the return
 * mirrors the runner exit code (ESSH_CONFIG for config errors). */
essh_status essh_run(const char* command, const char* config_json,
                     const char* out_dir, char** summary_out);

void essh_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* EXTSSH_H */
