#include "fogndt/popsim.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fogndt {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream derive_stream(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= trial * 0xd1b54a32d192ed03ULL;
  const std::uint64_t b = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return RandomStream(seq);
}

bool RequestVector::contains(std::size_t index) const {
  return std::find(indices.begin(), indices.end(), index) != indices.end();
}

PopularSet init_popular_set(std::size_t library_size, std::uint64_t /*seed*/) {
  if (library_size == 0) throw std::invalid_argument("popular set needs at least one file");
  PopularSet set;
  set.files.resize(library_size);
  std::iota(set.files.begin(), set.files.end(), FileId{0});
  set.next_fresh_id = library_size;
  return set;
}

PopularSet advance(const PopularSet& set, double churn_probability, RandomStream& rng) {
  PopularSet next = set;
  ++next.slot;
  next.arrival = false;
  next.replaced_index.reset();

  std::bernoulli_distribution arrival(churn_probability);
  if (arrival(rng)) {
    std::uniform_int_distribution<std::size_t> position(0, set.files.size() - 1);
    const std::size_t idx = position(rng);
    next.files[idx] = next.next_fresh_id++;
    next.arrival = true;
    next.replaced_index = idx;
  }
  return next;
}

RequestVector sample_requests(const PopularSet& set, std::size_t users, RandomStream& rng) {
  const std::size_t n = set.files.size();
  if (users > n) {
    throw std::invalid_argument("cannot request " + std::to_string(users) + " distinct files from " +
                                std::to_string(n));
  }
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < users; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(users);
  return RequestVector{std::move(pool)};
}

bool fresh_file_requested(const PopularSet& set, const RequestVector& requests) {
  return set.arrival && requests.contains(*set.replaced_index);
}

void write_trace_header(std::ostream& out) { out << "slot,arrival,replaced_index,requests\n"; }

void write_trace_row(std::ostream& out, const PopularSet& set, const RequestVector& requests) {
  out << set.slot << ',' << (set.arrival ? 1 : 0) << ',';
  if (set.replaced_index) out << *set.replaced_index;
  out << ',';
  for (std::size_t i = 0; i < requests.indices.size(); ++i) {
    if (i) out << ';';
    out << requests.indices[i];
  }
  out << '\n';
}

}  // namespace fogndt
