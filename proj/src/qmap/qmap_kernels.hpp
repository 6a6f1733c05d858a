#pragma once

#include "eos/qmap.hpp"

namespace eos::qmap {

// AVX2 kernel table; falls back to the scalar table when built without AVX2
// support. Selection happens in qmap_dispatch.cpp.
const Kernels& avx2_kernels();

}  // namespace eos::qmap
