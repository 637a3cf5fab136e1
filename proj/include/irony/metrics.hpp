#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "irony/task.hpp"

namespace irony {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// How subtask B combines per-class scores. The default averages per-class
// F1; the alternative takes the harmonic mean of the averaged P and R.
enum class MacroMode { MeanOfF1, F1OfMeans };

using ConfusionMatrix = std::vector<std::vector<long>>;  // [gold][predicted]

struct EvalReport {
  Task task = Task::A;
  MacroMode macro = MacroMode::MeanOfF1;
  ConfusionMatrix confusion;
  long total = 0;
  double accuracy = 0.0;
  std::vector<Prf> per_class;
  Prf aggregate;  // class 1 for task A, macro average for task B
};

Prf prf_from_counts(long tp, long fp, long fn);

EvalReport evaluate(std::span<const int> gold, std::span<const int> predicted, Task task,
                    MacroMode macro = MacroMode::MeanOfF1);
EvalReport evaluate_confusion(const ConfusionMatrix& confusion, Task task, MacroMode macro = MacroMode::MeanOfF1);

// Aligned table, percentages to 2 decimals.
void write_report_text(std::ostream& out, const EvalReport& report);
// "metric \t class \t value" rows at full precision.
void write_report_tsv(std::ostream& out, const EvalReport& report);

}  // namespace irony
