#pragma once

#include <iosfwd>

#include "dweb/config.hpp"
#include "dweb/emitters.hpp"
#include "dweb/model.hpp"
#include "dweb/schema_generator.hpp"
#include "dweb/workload.hpp"

namespace dweb {

struct GenerateOutcome {
    Warehouse warehouse;
    Workload workload;
    SizeReport size;
    EmitResult emitted;  // empty when config.out_dir is empty
};

// The `generate` command: validates the effective config, resolves low-level
// parameters and the dimension assignment, surfaces the expected fact rows
// (and refuses above the max-rows guard) before generating, then generates
// warehouse + workload and emits every artifact under config.out_dir.
// `log`, when non-null, receives the pre-generation expectation lines.
GenerateOutcome generate_all(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace dweb
