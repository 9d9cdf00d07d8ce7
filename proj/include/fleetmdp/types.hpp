#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fleetmdp {

using NodeId = int32_t;
using Seconds = int64_t;
using Count = int64_t;

/// Raised for malformed user input (bad file, bad argument). CLI exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised for corrupt or inconsistent data files. CLI exit code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an internal invariant breaks. CLI exit code 4.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Time grid of the decision process. Epoch t in 1..epochs fires at
/// wall-clock t*epoch_len seconds.
struct Horizon {
  int epochs = 720;
  Seconds epoch_len = 120;

  Seconds epoch_time(int t) const { return Seconds(t) * epoch_len; }
  Seconds end_time() const { return epoch_time(epochs); }
  // Smallest epoch boundary strictly after s (boundaries at multiples of
  // epoch_len; s exactly on a boundary maps to the next one).
  Seconds next_boundary(Seconds s) const {
    return (s / epoch_len + 1) * epoch_len;
  }
  // 1-based epoch whose window [(t-1)*E, t*E) contains second s.
  int epoch_of(Seconds s) const { return int(s / epoch_len) + 1; }
};

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over raw bytes; used for content hashes in manifests.
inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t fnv1a(const std::string& s, uint64_t h = 0xcbf29ce484222325ULL) {
  return fnv1a(s.data(), s.size(), h);
}

}  // namespace fleetmdp
