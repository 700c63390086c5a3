#include "tap/types.hpp"

#include <cmath>
#include <set>

namespace tap {

void TimeSeries::validate() const {
  if (times.size() != elevations.size()) {
    throw InvalidInputError("time series: times and elevations differ in length (" +
                            std::to_string(times.size()) + " vs " +
                            std::to_string(elevations.size()) + ")");
  }
  if (times.empty()) {
    throw InvalidInputError("time series: at least one sample required");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(elevations[i])) {
      throw InvalidInputError("time series: non-finite value at sample " + std::to_string(i));
    }
  }
}

ConstituentSet ConstituentSet::of(std::vector<Constituent> members) {
  std::set<std::string> names;
  std::set<double> freqs;
  for (const auto& m : members) {
    if (!(m.frequency > 0.0) || !std::isfinite(m.frequency)) {
      throw InvalidInputError("constituent " + m.name + ": frequency must be positive");
    }
    if (!names.insert(m.name).second) {
      throw InvalidInputError("constituent set: duplicate name " + m.name);
    }
    if (!freqs.insert(m.frequency).second) {
      throw InvalidInputError("constituent set: duplicate frequency for " + m.name);
    }
  }
  ConstituentSet set;
  set.members = std::move(members);
  return set;
}

ConstituentSet TidalSolution::constituent_set() const {
  ConstituentSet set;
  set.members.reserve(components.size());
  for (const auto& c : components) set.members.push_back(c.constituent);
  return set;
}

}  // namespace tap
