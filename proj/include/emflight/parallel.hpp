#pragma once

namespace emflight {

// Every data-parallel kernel ships two paths: Serial is the reference
// implementation, Parallel the OpenMP one. Both must produce bit-identical
// results; tests compare them and tools/bench times them.
enum class ExecMode { Serial, Parallel };

}  // namespace emflight
