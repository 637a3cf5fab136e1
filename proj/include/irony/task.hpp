#pragma once

#include <string_view>

namespace irony {

// A: ironic vs non-ironic. B: non-irony, polarity-contrast verbal,
// other verbal, situational.
enum class Task { A, B };

constexpr int num_classes(Task task) { return task == Task::A ? 2 : 4; }

Task parse_task(std::string_view text);
const char* to_string(Task task);

}  // namespace irony
