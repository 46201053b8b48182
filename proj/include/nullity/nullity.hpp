#pragma once

// Umbrella header for the nullity constraint engine.

#include "nullity/catalog.hpp"     // IWYU pragma: export
#include "nullity/codegen.hpp"     // IWYU pragma: export
#include "nullity/constraint.hpp"  // IWYU pragma: export
#include "nullity/csv.hpp"         // IWYU pragma: export
#include "nullity/dsl.hpp"         // IWYU pragma: export
#include "nullity/engine.hpp"      // IWYU pragma: export
#include "nullity/enforcement.hpp" // IWYU pragma: export
#include "nullity/registry.hpp"    // IWYU pragma: export
#include "nullity/store.hpp"       // IWYU pragma: export
#include "nullity/value.hpp"       // IWYU pragma: export
