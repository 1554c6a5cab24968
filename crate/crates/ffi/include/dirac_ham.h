#ifndef DIRAC_HAM_H
#define DIRAC_HAM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define DH_OK 0

#define DH_ERR_NULL 1

#define DH_ERR_INVALID_SET 2

#define DH_ERR_DOMAIN 3

#define DH_ERR_PARSE 4

#define DH_ERR_BUDGET 5

#define DH_ERR_PRECONDITION 6

#define DH_ERR_CLASSIFICATION 7

#define DH_ERR_ROTATION 8

#define DH_ERR_HALL 9

#define DH_ERR_FRAME 10

#define DH_ERR_ILLEGAL_MOVE 11

#define DH_ERR_IO 12

#define DH_ERR_PANIC 13

#define DH_ERR_BUFFER 14

#define DH_ERR_UTF8 15

#define DH_CASE_DENSE_CROSSING 0

#define DH_CASE_NEAR_DISCONNECTED 1

#define DH_CASE_NEAR_BIPARTITE 2

#define DH_PLAYER_MAKER 0

#define DH_PLAYER_BREAKER 1

/**
 * Opaque game handle: a position of a graph-board Maker-Breaker game.
 */
typedef struct DhGame DhGame;

/**
 * Opaque graph handle.
 */
typedef struct DhGraph DhGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *dh_last_error(void);

/**
 * Builds a graph on `n` vertices from `m` edges given as `2m` endpoints.
 *
 * # Safety
 * `edges` must point to `2 * m` readable values (or be null when `m == 0`),
 * and `out` must be writable.
 */
int32_t dh_graph_from_edges(size_t n, const size_t *edges, size_t m, struct DhGraph **out);

/**
 * Parses the text edge-list format or graph JSON.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
int32_t dh_graph_parse(const char *text, struct DhGraph **out);

/**
 * # Safety
 * `g` must come from a `dh_graph_*` constructor and not be freed twice.
 */
void dh_graph_free(struct DhGraph *g);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t dh_graph_n(const struct DhGraph *g);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t dh_graph_m(const struct DhGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
int32_t dh_is_dirac(const struct DhGraph *g, bool *out);

/**
 * Checks that `seq[0..len]` is a Hamilton cycle of `g`.
 *
 * # Safety
 * `g` must be a live handle, `seq` must point to `len` values, `out` writable.
 */
int32_t dh_verify_hamilton_cycle(const struct DhGraph *g, const size_t *seq, size_t len, bool *out);

/**
 * Randomized rotation search. On success with `*found` true, the cycle's
 * `n` vertices are written to `out_seq`, which must have room for `cap`
 * values (`cap >= n`).
 *
 * # Safety
 * `g` must be a live handle; `out_seq` must point to `cap` writable values;
 * `found` must be writable.
 */
int32_t dh_find_hamilton_cycle(const struct DhGraph *g,
                               size_t restarts,
                               size_t max_steps,
                               uint64_t seed,
                               size_t *out_seq,
                               size_t cap,
                               bool *found);

/**
 * Structural case of a Dirac graph, one of the `DH_CASE_*` values.
 * `exact` selects exhaustive half-set search instead of local search.
 *
 * # Safety
 * `g` must be a live handle and `out_case` writable.
 */
int32_t dh_classify(const struct DhGraph *g,
                    double alpha,
                    double gamma,
                    bool exact,
                    uint64_t seed,
                    int32_t *out_case);

/**
 * Starts an `(a:b)` game on the edges of `g`.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
int32_t dh_game_new(const struct DhGraph *g,
                    size_t a,
                    size_t b,
                    int32_t first,
                    struct DhGame **out);

/**
 * # Safety
 * `game` must come from [`dh_game_new`] and not be freed twice.
 */
void dh_game_free(struct DhGame *game);

/**
 * Claims `element` for the player to move.
 *
 * # Safety
 * `game` must be a live handle.
 */
int32_t dh_game_claim(struct DhGame *game, size_t element);

/**
 * Player to move (`DH_PLAYER_*`), or -1 once the board is exhausted.
 *
 * # Safety
 * `game` must be a live handle.
 */
int32_t dh_game_to_move(const struct DhGame *game);

/**
 * Owner of `element`: `DH_PLAYER_*`, or -1 when unclaimed or out of range.
 *
 * # Safety
 * `game` must be a live handle.
 */
int32_t dh_game_owner(const struct DhGame *game, size_t element);

/**
 * Hex SHA-256 of the canonical position. The string is owned by the game
 * and valid until the next call on it.
 *
 * # Safety
 * `game` must be a live handle.
 */
const char *dh_game_state_hash(struct DhGame *game);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRAC_HAM_H */
