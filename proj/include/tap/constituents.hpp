/**
 * @file constituents.hpp
 * @brief Built-in catalog of tidal constituent frequencies.
 */
#pragma once

#include <string>
#include <vector>

#include "tap/types.hpp"

namespace tap {

/// Looks up a constituent by name (e.g. "M2") in the built-in catalog and
/// returns it with frequency sigma = 2*pi / period. Throws CatalogMissError
/// for unknown names.
Constituent constituent_frequency(const std::string& name);

/// Names available in the built-in catalog, in catalog order.
std::vector<std::string> constituent_catalog_names();

}  // namespace tap
