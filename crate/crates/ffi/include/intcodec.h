#ifndef INTCODEC_H
#define INTCODEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  INTCODEC_STATUS_OK = 0,
  INTCODEC_STATUS_NULL_POINTER = 1,
  INTCODEC_STATUS_INVALID_ARGUMENT = 2,
  INTCODEC_STATUS_UNKNOWN_CODEC = 3,
  INTCODEC_STATUS_NOT_SORTED = 4,
  INTCODEC_STATUS_CORRUPT = 5,
  INTCODEC_STATUS_TRUNCATED = 6,
  INTCODEC_STATUS_NOT_A_CONTAINER = 7,
  INTCODEC_STATUS_IO = 8,
  INTCODEC_STATUS_PANIC = 9,
} IntcodecStatus;

/**
 * Arrays decoded from a container.
 */
typedef struct IntcodecArrays IntcodecArrays;

/**
 * Bytes of an encoded container.
 */
typedef struct IntcodecBuffer IntcodecBuffer;

/**
 * A codec selected by name, e.g. `"bp32"` or `"simdfastpfor-s4"`.
 */
typedef struct IntcodecCodec IntcodecCodec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *intcodec_last_error(void);

/**
 * Number of available codec names.
 */
size_t intcodec_codec_count(void);

/**
 * Name of codec `index`, or null when out of range. The string is static.
 */
const char *intcodec_codec_name_at(size_t index);

/**
 * Looks up a codec by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
IntcodecStatus intcodec_codec_new(const char *name, IntcodecCodec **out);

/**
 * # Safety
 * `codec` must come from [`intcodec_codec_new`] and not be used afterwards.
 * Null is ignored.
 */
void intcodec_codec_free(IntcodecCodec *codec);

/**
 * Canonical name of `codec`; valid as long as the codec.
 *
 * # Safety
 * `codec` must be a live handle or null.
 */
const char *intcodec_codec_name(const IntcodecCodec *codec);

/**
 * Block size that the codec's core scheme works on; shorter tails go
 * through Variable Byte.
 *
 * # Safety
 * `codec` must be a live handle or null (which yields 0).
 */
size_t intcodec_codec_block_size(const IntcodecCodec *codec);

/**
 * Encodes one sorted (non-decreasing) array into a container holding a
 * single array.
 *
 * # Safety
 * `values` must point to `len` readable integers (it may be null when `len`
 * is 0); `codec` must be a live handle and `out` a valid pointer.
 */
IntcodecStatus intcodec_encode(const IntcodecCodec *codec,
                               const uint32_t *values,
                               size_t len,
                               IntcodecBuffer **out);

/**
 * # Safety
 * `buffer` must be a live handle or null.
 */
const uint8_t *intcodec_buffer_data(const IntcodecBuffer *buffer);

/**
 * # Safety
 * `buffer` must be a live handle or null.
 */
size_t intcodec_buffer_len(const IntcodecBuffer *buffer);

/**
 * # Safety
 * `buffer` must come from [`intcodec_encode`] and not be used afterwards.
 * Null is ignored.
 */
void intcodec_buffer_free(IntcodecBuffer *buffer);

/**
 * Decodes every array of a container. The codec is read from the container.
 *
 * # Safety
 * `data` must point to `len` readable bytes and `out` must be valid.
 */
IntcodecStatus intcodec_decode(const uint8_t *data, size_t len, IntcodecArrays **out);

/**
 * # Safety
 * `arrays` must be a live handle or null.
 */
size_t intcodec_arrays_count(const IntcodecArrays *arrays);

/**
 * Codec name stored in the decoded container.
 *
 * # Safety
 * `arrays` must be a live handle or null.
 */
const char *intcodec_arrays_codec(const IntcodecArrays *arrays);

/**
 * Borrows array `index`. The values stay valid until the handle is freed.
 *
 * # Safety
 * `arrays` must be a live handle; `values` and `len` must be valid pointers.
 */
IntcodecStatus intcodec_arrays_get(const IntcodecArrays *arrays,
                                   size_t index,
                                   const uint32_t **values,
                                   size_t *len);

/**
 * # Safety
 * `arrays` must come from [`intcodec_decode`] and not be used afterwards.
 * Null is ignored.
 */
void intcodec_arrays_free(IntcodecArrays *arrays);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INTCODEC_H */
