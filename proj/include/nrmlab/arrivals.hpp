#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nrmlab/errors.hpp"
#include "nrmlab/instance.hpp"
#include "nrmlab/rng.hpp"

namespace nrmlab {

/// Realized arrival times of every class over one horizon.  Times are
/// strictly increasing within a class and confined to [0, horizon].
struct ArrivalPath {
    std::uint64_t seed = 0;  ///< seed the path was sampled with (0 if loaded without one)
    double horizon = 0.0;
    std::vector<std::vector<double>> events;  ///< per class, ascending times

    std::size_t num_classes() const { return events.size(); }
    std::size_t total_events() const;
};

/// Sample one path for `inst`: per class, sums of Exponential(lambda_j)
/// gaps until the horizon is passed.  Class j draws from the substream
/// mix_seed(mix_seed(seed, stream_tag::arrivals), j), so identical
/// (seed, instance) pairs reproduce the path bit-for-bit and classes are
/// independent.
ArrivalPath sample_path(const Instance& inst, std::uint64_t seed);

/// Number of class-j events with time in (t1, t2].  Throws
/// WindowOutOfRange unless 0 <= t1 <= t2 <= horizon, InvalidArgument for a
/// bad class index.
std::int64_t count_in_window(const ArrivalPath& path, std::size_t cls, double t1, double t2);

struct MergedEvent {
    double time;
    std::uint32_t cls;
};

/// All events of all classes merged into one stream ordered by time, ties
/// broken by class index.
std::vector<MergedEvent> merge_events(const ArrivalPath& path);

/// JSON-lines dump: a metadata line {"seed":..,"horizon":..,"classes":..}
/// followed by one {"time":..,"class":..} line per event in merged order.
/// load accepts dumps with or without the metadata line and validates
/// against the instance (class range, window, per-class ordering).
void dump_path_jsonl(const ArrivalPath& path, std::ostream& out);
void dump_path_jsonl_file(const ArrivalPath& path, const std::string& file);
ArrivalPath load_path_jsonl(const Instance& inst, std::istream& in);
ArrivalPath load_path_jsonl_file(const Instance& inst, const std::string& file);

}  // namespace nrmlab
