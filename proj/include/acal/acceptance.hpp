#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace acal::acceptance {

// Thresholds, pinned.
inline constexpr double kSimPostMaxDb = -30.0;
inline constexpr double kSimPreMinDb = 0.0;
inline constexpr double kSimImprovementMinDb = 35.0;
inline constexpr double kSimRuntimeMaxSeconds = 60.0;
inline constexpr double kOnestageGapMinDb = 10.0;
inline constexpr double kStdReductionMinDb = 25.0;
inline constexpr double kSweepSpearmanMin = 0.0;  // strictly greater
inline constexpr double kTauTolFull = 0.01;
inline constexpr double kPhiTolDeg = 1.0;
inline constexpr double kTauTolMasked = 0.02;
inline constexpr double kEqualizerRelTol = 1e-9;
inline constexpr double kIdealQMaxDb = -200.0;
inline constexpr double kProjectionTol = 1e-12;
inline constexpr double kCommonTauTol = 0.02;
inline constexpr double kCommonPhiTolDeg = 1.0;
inline constexpr double kDftTol = 1e-12;
inline constexpr double kConvTol = 1e-10;
inline constexpr double kParsevalTol = 1e-10;
inline constexpr double kExperimentPostMaxDb = -40.0;

inline constexpr int kEstimatorDraws = 100;
inline constexpr int kEqualizerInstances = 100;

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<int> only;                      // empty: all criteria
    std::filesystem::path scratch_dir;          // empty: system temp directory
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run(const Options& opts);

/// "PASS  1  title: detail"
std::string format(const CriterionResult& r);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace acal::acceptance
