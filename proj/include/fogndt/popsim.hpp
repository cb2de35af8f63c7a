#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

namespace fogndt {

/// Deterministic random stream used by the simulators.
using RandomStream = std::mt19937_64;

/// Independent stream for trial `trial` of a run seeded with `seed`. Streams
/// for distinct (seed, trial) pairs are decorrelated through SplitMix64.
RandomStream derive_stream(std::uint64_t seed, std::uint64_t trial);

using FileId = std::uint64_t;

/// The popular set F_t: N distinct file identifiers. Identifiers are never
/// reused; a file arriving in slot t gets the next unused counter value.
struct PopularSet {
  std::uint64_t slot = 0;
  std::vector<FileId> files;
  bool arrival = false;
  /// Position in `files` overwritten this slot; present iff arrival.
  std::optional<std::size_t> replaced_index;
  FileId next_fresh_id = 0;

  std::size_t size() const { return files.size(); }
};

/// K distinct positions into the current PopularSet.
struct RequestVector {
  std::vector<std::size_t> indices;

  bool contains(std::size_t index) const;
};

/// Slot 0 holding files 0..N-1 with no arrival. The seed does not influence
/// the initial set; it is accepted so every process entry point is seeded.
PopularSet init_popular_set(std::size_t library_size, std::uint64_t seed = 0);

/// One step of the two-state churn process: with probability p a uniformly
/// chosen position gets a fresh file, otherwise the set is carried over.
PopularSet advance(const PopularSet& set, double churn_probability, RandomStream& rng);

/// K positions drawn uniformly without replacement (partial Fisher-Yates).
/// Throws std::invalid_argument when K exceeds the set size.
RequestVector sample_requests(const PopularSet& set, std::size_t users, RandomStream& rng);

/// True when this slot's arriving file is among the requests.
bool fresh_file_requested(const PopularSet& set, const RequestVector& requests);

/// CSV trace of a trajectory: slot,arrival,replaced_index,requests.
/// Requests are ';'-joined positions; replaced_index is empty without arrival.
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const PopularSet& set, const RequestVector& requests);

}  // namespace fogndt
