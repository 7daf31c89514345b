// SPDX-License-Identifier: MIT
#pragma once

/// Umbrella header: the whole library in one include.

#include "errors.hpp"     // IWYU pragma: export
#include "geometry.hpp"   // IWYU pragma: export
#include "params.hpp"     // IWYU pragma: export
#include "kernel.hpp"     // IWYU pragma: export
#include "qpft.hpp"       // IWYU pragma: export
#include "wigner.hpp"     // IWYU pragma: export
#include "lfm.hpp"        // IWYU pragma: export
#include "oracle.hpp"     // IWYU pragma: export
#include "io.hpp"         // IWYU pragma: export
