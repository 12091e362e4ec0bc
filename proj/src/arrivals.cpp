#include "nrmlab/arrivals.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace nrmlab {

std::size_t ArrivalPath::total_events() const {
    std::size_t total = 0;
    for (const auto& cls : events) total += cls.size();
    return total;
}

ArrivalPath sample_path(const Instance& inst, std::uint64_t seed) {
    ArrivalPath path;
    path.seed = seed;
    path.horizon = inst.horizon;
    path.events.resize(inst.num_classes());
    const std::uint64_t arrivals_seed = mix_seed(seed, stream_tag::arrivals);
    for (std::size_t j = 0; j < inst.num_classes(); ++j) {
        SplitMix64 rng(mix_seed(arrivals_seed, j));
        const double rate = inst.arrival_rate[j];
        auto& times = path.events[j];
        times.reserve(static_cast<std::size_t>(rate * inst.horizon * 1.2) + 8);
        double t = rng.exponential(rate);
        while (t <= inst.horizon) {
            times.push_back(t);
            t += rng.exponential(rate);
        }
    }
    return path;
}

std::int64_t count_in_window(const ArrivalPath& path, std::size_t cls, double t1, double t2) {
    if (cls >= path.num_classes())
        throw Error(Errc::InvalidArgument,
                    "class index " + std::to_string(cls) + " out of range");
    if (!(0.0 <= t1) || !(t1 <= t2) || !(t2 <= path.horizon))
        throw Error(Errc::WindowOutOfRange,
                    "window [" + std::to_string(t1) + ", " + std::to_string(t2) +
                        "] must satisfy 0 <= t1 <= t2 <= horizon");
    const auto& times = path.events[cls];
    const auto lo = std::upper_bound(times.begin(), times.end(), t1);
    const auto hi = std::upper_bound(times.begin(), times.end(), t2);
    return hi - lo;
}

std::vector<MergedEvent> merge_events(const ArrivalPath& path) {
    std::vector<MergedEvent> merged;
    merged.reserve(path.total_events());
    const std::size_t n = path.num_classes();
    std::vector<std::size_t> cursor(n, 0);
    for (;;) {
        double best_time = 0.0;
        std::size_t best_cls = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (cursor[j] >= path.events[j].size()) continue;
            const double t = path.events[j][cursor[j]];
            if (best_cls == n || t < best_time) {  // ties fall to the lower class index
                best_time = t;
                best_cls = j;
            }
        }
        if (best_cls == n) break;
        merged.push_back({best_time, static_cast<std::uint32_t>(best_cls)});
        ++cursor[best_cls];
    }
    return merged;
}

void dump_path_jsonl(const ArrivalPath& path, std::ostream& out) {
    nlohmann::json meta;
    meta["seed"] = path.seed;
    meta["horizon"] = path.horizon;
    meta["classes"] = path.num_classes();
    out << meta.dump() << '\n';
    for (const MergedEvent& e : merge_events(path)) {
        nlohmann::json line;
        line["time"] = e.time;
        line["class"] = e.cls;
        out << line.dump() << '\n';
    }
}

void dump_path_jsonl_file(const ArrivalPath& path, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw Error(Errc::IoError, "cannot write '" + file + "'");
    dump_path_jsonl(path, out);
    if (!out.good()) throw Error(Errc::IoError, "failed writing '" + file + "'");
}

ArrivalPath load_path_jsonl(const Instance& inst, std::istream& in) {
    ArrivalPath path;
    path.horizon = inst.horizon;
    path.events.resize(inst.num_classes());

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError,
                        "line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
        }
        if (line_no == 1 && j.is_object() && !j.contains("time")) {
            // metadata line
            if (j.contains("seed") && j.at("seed").is_number())
                path.seed = j.at("seed").get<std::uint64_t>();
            continue;
        }
        if (!j.is_object() || !j.contains("time") || !j.contains("class"))
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) +
                                              ": expected keys 'time' and 'class'");
        if (!j.at("time").is_number() || !j.at("class").is_number_unsigned())
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) +
                                              ": 'time' must be a number and 'class' an index");
        const double t = j.at("time").get<double>();
        const std::size_t cls = j.at("class").get<std::size_t>();
        if (cls >= inst.num_classes())
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": class " +
                                              std::to_string(cls) + " out of range");
        if (!(t >= 0.0) || !(t <= inst.horizon))
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) +
                                              ": time outside [0, horizon]");
        auto& times = path.events[cls];
        if (!times.empty() && !(t > times.back()))
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) +
                                              ": events of class " + std::to_string(cls) +
                                              " are not strictly increasing");
        times.push_back(t);
    }
    return path;
}

ArrivalPath load_path_jsonl_file(const Instance& inst, const std::string& file) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::IoError, "cannot open '" + file + "'");
    return load_path_jsonl(inst, in);
}

}  // namespace nrmlab
