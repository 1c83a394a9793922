#ifndef IVD_H
#define IVD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IvdStatus {
  IVD_STATUS_OK = 0,
  IVD_STATUS_NULL_POINTER = 1,
  IVD_STATUS_INVALID_UTF8 = 2,
  IVD_STATUS_PARSE_ERROR = 3,
  IVD_STATUS_INVALID_INSTANCE = 4,
  /**
   * The requested algorithm does not apply to this instance.
   */
  IVD_STATUS_NOT_APPLICABLE = 5,
  IVD_STATUS_BUDGET_EXCEEDED = 6,
  IVD_STATUS_LENGTH_MISMATCH = 7,
  IVD_STATUS_INVALID_VERTEX = 8,
  IVD_STATUS_INTERNAL = 9,
  IVD_STATUS_PANIC = 10,
} IvdStatus;

typedef enum IvdAlgo {
  IVD_ALGO_AUTO = 0,
  IVD_ALGO_TREE = 1,
  IVD_ALGO_SAT2 = 2,
  IVD_ALGO_BRUTE = 3,
} IvdAlgo;

/**
 * Parsed instance.
 */
typedef struct IvdInstance IvdInstance;

/**
 * Site list, one vertex per cell.
 */
typedef struct IvdSolution IvdSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON instance.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_instance` writable.
 */
enum IvdStatus ivd_instance_parse(const char *json, struct IvdInstance **out_instance);

/**
 * # Safety
 * `inst` must come from [`ivd_instance_parse`] and not be freed twice.
 */
void ivd_instance_free(struct IvdInstance *inst);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t ivd_instance_vertex_count(const struct IvdInstance *inst);

/**
 * Cell count, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t ivd_instance_cell_count(const struct IvdInstance *inst);

/**
 * Decides the instance. On `IVD_STATUS_OK`, `*found` tells whether sites
 * exist; if so `*out_solution` holds them, otherwise it is null.
 * `budget` bounds the brute-force search only.
 *
 * # Safety
 * `inst` must be a live handle; `out_solution` and `found` writable.
 */
enum IvdStatus ivd_solve(const struct IvdInstance *inst,
                         enum IvdAlgo algo,
                         uint64_t budget,
                         struct IvdSolution **out_solution,
                         bool *found);

/**
 * Builds a solution from `len` vertex ids.
 *
 * # Safety
 * `sites` must point to `len` readable values (or be null when `len` is 0).
 */
enum IvdStatus ivd_solution_new(const size_t *sites, size_t len, struct IvdSolution **out_solution);

/**
 * Number of sites, or 0 for a null handle.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
size_t ivd_solution_len(const struct IvdSolution *sol);

/**
 * Pointer to the site array, valid while the handle lives.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
const size_t *ivd_solution_sites(const struct IvdSolution *sol);

/**
 * JSON form of the solution, to be released with [`ivd_string_free`].
 *
 * # Safety
 * `sol` must be a live handle and `out_json` writable.
 */
enum IvdStatus ivd_solution_to_json(const struct IvdSolution *sol, char **out_json);

/**
 * # Safety
 * `sol` must come from this library and not be freed twice.
 */
void ivd_solution_free(struct IvdSolution *sol);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ivd_string_free(char *s);

/**
 * Checks whether `sol` induces exactly the instance's cells.
 *
 * # Safety
 * `inst` and `sol` must be live handles and `valid` writable.
 */
enum IvdStatus ivd_check(const struct IvdInstance *inst,
                         const struct IvdSolution *sol,
                         bool *valid);

/**
 * Static description of a status code.
 */
const char *ivd_status_message(enum IvdStatus status);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *ivd_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IVD_H */
