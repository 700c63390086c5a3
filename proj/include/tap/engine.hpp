/**
 * @file engine.hpp
 * @brief System-under-test interface: analysis and prediction modes.
 */
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tap/faults.hpp"
#include "tap/harmonic.hpp"
#include "tap/types.hpp"

namespace tap {

/// A tidal analysis and prediction engine. Implementations must be pure:
/// concurrent independent invocations return the same results as sequential
/// ones.
class Engine {
 public:
  virtual ~Engine() = default;

  virtual TidalSolution analyze(const TimeSeries& series, const ConstituentSet& constituents,
                                const FitConfig& config) const = 0;
  virtual TimeSeries predict(const TidalSolution& solution,
                             const std::vector<double>& times) const = 0;
  virtual std::string name() const = 0;
};

/// The in-process engine. An optional fault state turns it into a mutant;
/// the default state is the unfaulted reference.
class ReferenceEngine final : public Engine {
 public:
  ReferenceEngine() = default;
  explicit ReferenceEngine(FaultState faults) : faults_(faults) {}

  TidalSolution analyze(const TimeSeries& series, const ConstituentSet& constituents,
                        const FitConfig& config) const override {
    return detail::analyze(series, constituents, config, faults_);
  }

  TimeSeries predict(const TidalSolution& solution,
                     const std::vector<double>& times) const override {
    return detail::predict(solution, times, faults_);
  }

  std::string name() const override {
    return faults_.site == FaultSite::none ? "reference" : "mutant";
  }

  const FaultState& faults() const noexcept { return faults_; }

 private:
  FaultState faults_{};
};

}  // namespace tap
