#ifndef FMCW_EVAL_HPP
#define FMCW_EVAL_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "detect.hpp"
#include "scene.hpp"

namespace fmcw {

struct AlignedPair {
    double timestamp = 0.0;
    double est_range = 0.0;
    double true_range = 0.0;
    double est_velocity = 0.0;
    double true_velocity = 0.0;
};

struct RunRmse {
    double range_rmse = 0.0;     // [m]
    double velocity_rmse = 0.0;  // [m/s]
    std::size_t sample_count = 0;
};

struct RmseReport {
    double range_rmse_mean = 0.0;
    double range_rmse_std = 0.0;
    double velocity_rmse_mean = 0.0;
    double velocity_rmse_std = 0.0;
    std::vector<double> per_run_range_rmse;
    std::vector<double> per_run_velocity_rmse;
    std::size_t sample_count = 0;  // total aligned pairs over all runs
};

/// Pairs each in-range track point with the nearest-timestamp in-range truth
/// point within `tolerance` seconds. Each truth point is used at most once;
/// unmatched points are dropped. Both inputs must be time-sorted.
inline std::vector<AlignedPair> align(const std::vector<TrackPoint>& tracks,
                                      const std::vector<GroundTruthPoint>& truth,
                                      double tolerance = 0.025) {
    for (std::size_t i = 1; i < tracks.size(); ++i)
        if (tracks[i].timestamp < tracks[i - 1].timestamp)
            throw std::invalid_argument("align: track points not time-sorted");
    for (std::size_t i = 1; i < truth.size(); ++i)
        if (truth[i].timestamp < truth[i - 1].timestamp)
            throw std::invalid_argument("align: truth points not time-sorted");

    std::vector<AlignedPair> pairs;
    std::size_t start = 0;  // truth points before this index are consumed
    for (const auto& tp : tracks) {
        if (!tp.in_range) continue;
        std::size_t best = truth.size();
        double best_dt = tolerance;
        for (std::size_t i = start; i < truth.size(); ++i) {
            double dt = std::abs(truth[i].timestamp - tp.timestamp);
            if (dt <= best_dt) {
                best_dt = dt;
                best = i;
            }
            if (truth[i].timestamp > tp.timestamp + tolerance) break;
        }
        if (best == truth.size()) continue;
        start = best + 1;
        if (!truth[best].in_range) continue;
        pairs.push_back({tp.timestamp, tp.range, truth[best].range, tp.radial_velocity,
                         truth[best].radial_velocity});
    }
    return pairs;
}

/// Root mean squared error per coordinate over aligned pairs.
inline RunRmse compute_rmse(const std::vector<AlignedPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("compute_rmse: no aligned pairs");
    double range_sq = 0.0;
    double vel_sq = 0.0;
    for (const auto& p : pairs) {
        double dr = p.est_range - p.true_range;
        double dv = p.est_velocity - p.true_velocity;
        range_sq += dr * dr;
        vel_sq += dv * dv;
    }
    double n = static_cast<double>(pairs.size());
    return {std::sqrt(range_sq / n), std::sqrt(vel_sq / n), pairs.size()};
}

namespace detail {

inline void mean_std(const std::vector<double>& xs, double& mean, double& stddev) {
    double n = static_cast<double>(xs.size());
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    stddev = std::sqrt(var / n);  // population std: 0 for a single run
}

}  // namespace detail

/// Mean and population standard deviation of per-run RMSEs.
inline RmseReport summarize_runs(const std::vector<RunRmse>& runs) {
    if (runs.empty()) throw std::invalid_argument("summarize_runs: no runs");
    RmseReport report;
    for (const auto& r : runs) {
        report.per_run_range_rmse.push_back(r.range_rmse);
        report.per_run_velocity_rmse.push_back(r.velocity_rmse);
        report.sample_count += r.sample_count;
    }
    detail::mean_std(report.per_run_range_rmse, report.range_rmse_mean, report.range_rmse_std);
    detail::mean_std(report.per_run_velocity_rmse, report.velocity_rmse_mean,
                     report.velocity_rmse_std);
    return report;
}

/// Deterministic key-value document; keys carry unit suffixes.
inline nlohmann::json export_report(const RmseReport& report) {
    return nlohmann::json{{"range_rmse_m", report.range_rmse_mean},
                          {"range_rmse_std_m", report.range_rmse_std},
                          {"velocity_rmse_mps", report.velocity_rmse_mean},
                          {"velocity_rmse_std_mps", report.velocity_rmse_std},
                          {"per_run_range_rmse_m", report.per_run_range_rmse},
                          {"per_run_velocity_rmse_mps", report.per_run_velocity_rmse},
                          {"run_count", report.per_run_range_rmse.size()},
                          {"sample_count", report.sample_count}};
}

inline RmseReport report_from_json(const nlohmann::json& j) {
    RmseReport report;
    report.range_rmse_mean = j.at("range_rmse_m").get<double>();
    report.range_rmse_std = j.at("range_rmse_std_m").get<double>();
    report.velocity_rmse_mean = j.at("velocity_rmse_mps").get<double>();
    report.velocity_rmse_std = j.at("velocity_rmse_std_mps").get<double>();
    report.per_run_range_rmse = j.at("per_run_range_rmse_m").get<std::vector<double>>();
    report.per_run_velocity_rmse = j.at("per_run_velocity_rmse_mps").get<std::vector<double>>();
    report.sample_count = j.at("sample_count").get<std::size_t>();
    return report;
}

/// Truth track from an odometry speed log: range integrated (trapezoidal)
/// from the initial distance, speed taken as the radial velocity.
inline std::vector<GroundTruthPoint> truth_from_odometry(
    const std::vector<std::pair<double, double>>& timestamp_speed, double initial_distance) {
    std::vector<GroundTruthPoint> truth;
    double range = initial_distance;
    for (std::size_t i = 0; i < timestamp_speed.size(); ++i) {
        if (i > 0) {
            double dt = timestamp_speed[i].first - timestamp_speed[i - 1].first;
            range += 0.5 * (timestamp_speed[i].second + timestamp_speed[i - 1].second) * dt;
        }
        truth.push_back({timestamp_speed[i].first, range, timestamp_speed[i].second, true});
    }
    return truth;
}

}  // namespace fmcw

#endif
