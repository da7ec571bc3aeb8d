#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "funbench/fcurve.hpp"

namespace funbench {

inline constexpr std::size_t kTecatorRows = 215;
inline constexpr std::size_t kTecatorChannels = 100;
inline constexpr std::size_t kAemetRows = 73;
inline constexpr std::size_t kAemetDays = 365;

struct TecatorData {
    FunctionalDataset absorbance;  // channels on a uniform [0,1] grid
    ScalarResponses fat;
};

struct AemetData {
    FunctionalDataset temperature;  // day of year on a uniform [0,1] grid
    FunctionalDataset log_precip;   // log(1 + precipitation)
};

/// Reads `ch1..ch100,fat`. The row count must equal `expected_rows` unless
/// it is nullopt, which accepts any positive count (used for fixtures).
TecatorData load_tecator(const std::string& path, std::optional<std::size_t> expected_rows = kTecatorRows);
void save_tecator(const TecatorData& data, const std::string& path);

/// Reads two `d1..d365` files: temperature and raw precipitation.
AemetData load_aemet(const std::string& temp_path, const std::string& precip_path,
                     std::optional<std::size_t> expected_rows = kAemetRows);
/// Writes temperature and raw precipitation, inverting the log transform.
void save_aemet(const AemetData& data, const std::string& temp_path, const std::string& precip_path);

struct SplitProtocol {
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;

    static SplitProtocol tecator(std::uint64_t seed, std::size_t repeats = 10) { return {200, 15, repeats, seed}; }
    static SplitProtocol aemet(std::uint64_t seed, std::size_t repeats = 10) { return {65, 8, repeats, seed}; }
};

struct Split {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

/// One seeded permutation of 0..n-1 per repeat; the first n_train indices
/// train and the next n_test test.
std::vector<Split> make_splits(std::size_t n, const SplitProtocol& protocol);

}  // namespace funbench
