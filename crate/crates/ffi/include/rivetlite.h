#ifndef RIVETLITE_H
#define RIVETLITE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum rivetlite_status {
  RIVETLITE_STATUS_OK = 0,
  /*
   Null pointer, bad UTF-8 or out-of-range option.
   */
  RIVETLITE_STATUS_INVALID_ARGUMENT = 1,
  /*
   Malformed circuit, topology or device name.
   */
  RIVETLITE_STATUS_PARSE_ERROR = 2,
  /*
   Transpilation or simulation failed.
   */
  RIVETLITE_STATUS_PIPELINE_ERROR = 3,
  /*
   A Rust panic was caught at the boundary.
   */
  RIVETLITE_STATUS_PANIC = 4,
} rivetlite_status;

/*
 Virtual circuit.
 */
typedef struct rivetlite_circuit rivetlite_circuit;

/*
 Device coupling graph and basis.
 */
typedef struct rivetlite_topology rivetlite_topology;

/*
 Compiled circuit with its layouts.
 */
typedef struct rivetlite_transpiled rivetlite_transpiled;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *rivetlite_last_error_message(void);

/*
 # Safety
 `s` must come from a rivetlite call that returns an owned string, and
 must not be freed twice.
 */
void rivetlite_string_free(char *s);

/*
 Parse a circuit from its JSON form.

 # Safety
 `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum rivetlite_status rivetlite_circuit_from_json(const char *json, struct rivetlite_circuit **out);

/*
 # Safety
 `c` must be a circuit handle or null.
 */
size_t rivetlite_circuit_num_qubits(const struct rivetlite_circuit *c);

/*
 # Safety
 `c` must be a circuit handle or null, freed at most once.
 */
void rivetlite_circuit_free(struct rivetlite_circuit *c);

/*
 Look up a device by builtin name (`heavyhex-27`, `linear-N`, `ring-N`,
 `grid-RxC`) or load a topology JSON file.

 # Safety
 `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum rivetlite_status rivetlite_topology_builtin(const char *name, struct rivetlite_topology **out);

/*
 # Safety
 `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum rivetlite_status rivetlite_topology_from_json(const char *json,
                                                   struct rivetlite_topology **out);

/*
 # Safety
 `t` must be a topology handle or null.
 */
size_t rivetlite_topology_num_physical(const struct rivetlite_topology *t);

/*
 # Safety
 `t` must be a topology handle or null, freed at most once.
 */
void rivetlite_topology_free(struct rivetlite_topology *t);

/*
 Compile `circuit` for `topology` from scratch.

 # Safety
 Handles must be valid and `out` a writable pointer.
 */
enum rivetlite_status rivetlite_transpile(const struct rivetlite_circuit *circuit,
                                          const struct rivetlite_topology *topology,
                                          uint8_t optimization_level,
                                          uint64_t seed,
                                          struct rivetlite_transpiled **out);

/*
 Compile only `suffix` and append it to the already compiled `left`.

 # Safety
 Handles must be valid and `out` a writable pointer.
 */
enum rivetlite_status rivetlite_transpile_right(const struct rivetlite_transpiled *left,
                                                const struct rivetlite_circuit *suffix,
                                                const struct rivetlite_topology *topology,
                                                uint8_t optimization_level,
                                                uint64_t seed,
                                                struct rivetlite_transpiled **out);

/*
 Serialize a compiled circuit; release the string with
 `rivetlite_string_free`.

 # Safety
 `t` must be a valid handle and `out` a writable pointer.
 */
enum rivetlite_status rivetlite_transpiled_to_json(const struct rivetlite_transpiled *t,
                                                   char **out);

/*
 # Safety
 `t` must be a transpiled handle or null.
 */
size_t rivetlite_transpiled_depth(const struct rivetlite_transpiled *t);

/*
 # Safety
 `t` must be a transpiled handle or null.
 */
size_t rivetlite_transpiled_two_qubit_count(const struct rivetlite_transpiled *t);

/*
 Wall-clock seconds the compile took, or a negative value for null.

 # Safety
 `t` must be a transpiled handle or null.
 */
double rivetlite_transpiled_elapsed_seconds(const struct rivetlite_transpiled *t);

/*
 Sample the compiled circuit's measurements `shots` times and return the
 counts as JSON (`{"shots": N, "counts": {"01": k, ...}}`).

 # Safety
 `t` must be a valid handle and `out` a writable pointer.
 */
enum rivetlite_status rivetlite_transpiled_sample_counts(const struct rivetlite_transpiled *t,
                                                         uint64_t shots,
                                                         uint64_t seed,
                                                         char **out);

/*
 # Safety
 `t` must be a transpiled handle or null, freed at most once.
 */
void rivetlite_transpiled_free(struct rivetlite_transpiled *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIVETLITE_H */
