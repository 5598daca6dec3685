// Copyright 2026 The clinee Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Micro-averaged P/R/F1 for trigger and argument identification and
// classification, stage-wise attribution of argument errors, and
// aggregation over repeated runs.

#ifndef CLINEE_EVAL_H_
#define CLINEE_EVAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "clinee/dataset.h"
#include "clinee/pipeline.h"

namespace clinee {

struct TaskScore {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  // Sample standard deviations; nonzero only for aggregated reports.
  double precision_sd = 0;
  double recall_sd = 0;
  double f1_sd = 0;

  // Fills precision, recall and f1 from the counts.
  void Finalize();
};

struct MetricReport {
  TaskScore trigger_id;
  TaskScore trigger_cls;
  TaskScore arg_id;
  TaskScore arg_cls;
  int runs = 1;

  // In the order trigger_id, trigger_cls, arg_id, arg_cls.
  static const std::vector<std::string> &TaskNames();
  TaskScore &Get(size_t i);
  const TaskScore &Get(size_t i) const;
};

// Greedy one-to-one exact matching. Grounded predictions match gold by span,
// text-only predictions by surface. Arguments also require the predicted
// event type to equal the gold event's type. Gold sentences absent from
// `pred` count as empty predictions; predicted sentences absent from `gold`
// raise kAlignmentError.
MetricReport Score(const PredictionSet &pred, const Dataset &gold);

struct ErrorAttribution {
  int64_t trigger_id_miss = 0;
  int64_t trigger_cls_miss = 0;
  int64_t arg_id_miss = 0;
  int64_t arg_cls_miss = 0;
  int64_t correct = 0;

  int64_t total() const {
    return trigger_id_miss + trigger_cls_miss + arg_id_miss + arg_cls_miss + correct;
  }
};

// Assigns each gold argument to the first check it fails: trigger span,
// trigger type, argument span, role.
ErrorAttribution AttributeErrors(const PredictionSet &pred, const Dataset &gold);

// Number of gold arguments as counted by Score and AttributeErrors.
int64_t CountGoldArguments(const Dataset &gold);

// Mean P/R/F1 per cell with sample standard deviation; counts are summed.
// Throws kInvalidArgument on an empty list.
MetricReport AggregateRuns(const std::vector<MetricReport> &reports);

std::string ReportToJson(const MetricReport &report);
std::string AttributionToJson(const ErrorAttribution &a);
// Trigger and Argument column groups, Identification and Classification
// under each, P/R/F1 in percent.
std::string FormatReport(const MetricReport &report);

}  // namespace clinee

#endif  // CLINEE_EVAL_H_
