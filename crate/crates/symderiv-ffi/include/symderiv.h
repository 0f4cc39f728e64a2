/* C ABI for the symderiv toolkit.
 *
 * Every computation fills *out_json with a heap-allocated JSON report
 * (release it with symderiv_string_free) and returns an error code.
 * out_json may be NULL when the report is not wanted.
 *
 * Maintained by hand alongside crates/symderiv-ffi/src/lib.rs.
 */

#ifndef SYMDERIV_H
#define SYMDERIV_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes. */
#define SYMDERIV_OK 0            /* all assertable checks passed   */
#define SYMDERIV_CHECK_FAILED 1  /* report produced, >= 1 failure  */
#define SYMDERIV_BAD_PARAMETER 2 /* unusable arguments             */
#define SYMDERIV_INTERNAL 3      /* internal error                 */

/* Opaque handle carrying the cache configuration. */
typedef struct SymderivContext SymderivContext;

/* cache_dir may be NULL for a cache-less context.  Returns NULL on
 * invalid input. */
SymderivContext *symderiv_context_new(const char *cache_dir);

void symderiv_context_free(SymderivContext *ctx);

/* Release a string returned through an out_json parameter. */
void symderiv_string_free(char *s);

/* Static version string; do not free. */
const char *symderiv_version(void);

/* Dimension table of the graded pieces.  symplectic != 0 selects the
 * genus-`param` symplectic space, 0 a plain space of dimension `param`. */
int symderiv_dims(SymderivContext *ctx, int symplectic, unsigned param,
                  unsigned max_degree, char **out_json);

/* Weight piece of the abelianization of the positive-degree part.
 * algebra is "sympl", "plain" or "lie"; param is the genus or the plain
 * dimension. */
int symderiv_abelianize(SymderivContext *ctx, const char *algebra,
                        unsigned param, unsigned weight, int allow_expensive,
                        char **out_json);

/* The identity battery; full_tier != 0 adds the genus-4 end-to-end run
 * and the nine-gon contraction. */
int symderiv_verify(SymderivContext *ctx, int full_tier, char **out_json);

/* Cyclic polygon contractions over the inclusive range k_min..k_max;
 * symmetric != 0 uses symmetrized factors, disconnected != 0 adds the
 * two-cycle contractions. */
int symderiv_polygon(SymderivContext *ctx, unsigned k_min, unsigned k_max,
                     int symmetric, int disconnected, char **out_json);

/* Weight-2 abelianization of the plain derivation algebra at dimension n,
 * reported against the predicted square dimension. */
int symderiv_conjecture(SymderivContext *ctx, unsigned n, char **out_json);

/* Isotypic dimension bookkeeping for the quadratic part at this genus. */
int symderiv_decompose(SymderivContext *ctx, unsigned genus, char **out_json);

#ifdef __cplusplus
}
#endif

#endif /* SYMDERIV_H */
