#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace chac {

// Batch-sized matrices are allocated and freed every update; keep them on
// the heap instead of round-tripping through mmap/munmap.
inline void TuneAllocator() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 256 * 1024 * 1024);
  mallopt(M_TRIM_THRESHOLD, 512 * 1024 * 1024);
  mallopt(M_TOP_PAD, 64 * 1024 * 1024);
#endif
}

}  // namespace chac
