#pragma once

#include <string>
#include <vector>

namespace asrfix {

/// One narrow-context entry: the text a user might say, what it resolves to
/// (itself, or the full option for partial matches and ordinals), and the
/// canonical task id when one is known.
struct ContextEntry {
    std::string text;
    std::string resolve_to;
    std::string task_id;

    /// Correction target: the task id when known, the resolved text otherwise.
    const std::string& target() const { return task_id.empty() ? resolve_to : task_id; }
};

} // namespace asrfix
