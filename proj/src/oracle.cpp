#include "rsopt/oracle.hpp"

#include <cstring>

namespace rsopt {

namespace {

const std::vector<double> kEmptyRecord;

std::uint64_t fnv1a(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

bool in_box(const Configuration& config, const Box& domain) {
    if (config.coords.size() != domain.size()) return false;
    for (std::size_t i = 0; i < domain.size(); ++i)
        if (!domain[i].contains(config.coords[i])) return false;
    return true;
}

std::uint64_t config_stream_id(const Configuration& config) {
    const std::uint64_t h =
        fnv1a(config.coords.data(), config.coords.size() * sizeof(double));
    // Stream 0 is reserved for the shared CRN stream.
    return h == kCrnStream ? 0x9e3779b97f4a7c15ULL : h;
}

std::string CrnOracle::memory_key(const Configuration& config) {
    return std::string(reinterpret_cast<const char*>(config.coords.data()),
                       config.coords.size() * sizeof(double));
}

double CrnOracle::evaluate(const Configuration& config, std::size_t seed_index, Regime regime) {
    if (seed_index == 0) throw std::invalid_argument("evaluate: seed positions are 1-based");
    auto& record = memory_[memory_key(config)];
    if (seed_index <= record.size()) return record[seed_index - 1];
    if (seed_index != record.size() + 1)
        throw std::logic_error("evaluate: seed position skips ahead of the record");
    if (ledger_.spent >= ledger_.total) throw BudgetExhausted();

    const std::uint64_t stream =
        regime == Regime::Crn ? kCrnStream : config_stream_id(config);
    const double z = streams_.normal(stream, seed_index);
    const double value = objective_.sample(config.coords, z);
    record.push_back(value);
    ++ledger_.spent;
    return value;
}

const std::vector<double>& CrnOracle::sample_prefix(const Configuration& config, std::size_t n,
                                                    Regime regime) {
    const std::string key = memory_key(config);
    for (std::size_t i = memory_[key].size(); i < n; ++i)
        evaluate(config, i + 1, regime);
    return memory_[key];
}

double CrnOracle::noiseless_value(const Configuration& config) const {
    return objective_.mean(config.coords);
}

std::size_t CrnOracle::recorded_count(const Configuration& config) const {
    const auto it = memory_.find(memory_key(config));
    return it == memory_.end() ? 0 : it->second.size();
}

const std::vector<double>& CrnOracle::recorded(const Configuration& config) const {
    const auto it = memory_.find(memory_key(config));
    return it == memory_.end() ? kEmptyRecord : it->second;
}

}  // namespace rsopt
