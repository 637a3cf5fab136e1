#include "irony/error.hpp"

#include <string>

#include "irony/task.hpp"

namespace irony {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Resource: return "resource error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Integrity: return "integrity error";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::TaskMismatch: return "task mismatch";
    case ErrorKind::Internal: return "internal error";
  }
  return "error";
}

Task parse_task(std::string_view text) {
  if (text == "A" || text == "a" || text == "1") return Task::A;
  if (text == "B" || text == "b" || text == "2") return Task::B;
  throw Error(ErrorKind::Config, "unknown task '" + std::string(text) + "' (expected A or B)");
}

const char* to_string(Task task) { return task == Task::A ? "A" : "B"; }

}  // namespace irony
