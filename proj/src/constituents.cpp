#include "tap/constituents.hpp"

#include <array>

#include "tap/errors.hpp"

namespace tap {

namespace {

struct CatalogEntry {
  const char* name;
  double period_hours;
};

// Principal diurnal and semidiurnal constituents; periods in mean solar
// hours. M2 is the principal lunar semidiurnal (12 h 25.2 min).
constexpr std::array<CatalogEntry, 5> kCatalog{{
    {"M2", 12.42},
    {"S2", 12.0},
    {"N2", 12.6583},
    {"K1", 23.9345},
    {"O1", 25.8193},
}};

}  // namespace

Constituent constituent_frequency(const std::string& name) {
  for (const auto& entry : kCatalog) {
    if (name == entry.name) {
      return Constituent{entry.name, kTwoPi / entry.period_hours};
    }
  }
  throw CatalogMissError("constituent catalog", name);
}

std::vector<std::string> constituent_catalog_names() {
  std::vector<std::string> names;
  names.reserve(kCatalog.size());
  for (const auto& entry : kCatalog) names.emplace_back(entry.name);
  return names;
}

}  // namespace tap
