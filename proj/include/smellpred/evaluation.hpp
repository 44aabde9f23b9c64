#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smellpred/classifiers.hpp"
#include "smellpred/feature_selection.hpp"
#include "smellpred/smote.hpp"
#include "smellpred/types.hpp"

namespace smellpred {

/// Counts for the defect-prone (positive) class.
struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
};

struct MeasureSet {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    double accuracy = 0.0;
    double kappa = 0.0;
};

/// Per class: a seeded shuffle, then the first round(fraction * count)
/// records go to train, the rest to eval; both halves keep the input
/// record order. Errors: SingleClass, InvalidConfig.
std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& dataset,
                                                           double fraction, std::uint64_t seed);

/// Errors: SchemaMismatch when the dataset features differ from the model's.
ConfusionMatrix confusion(const TrainedModel& model, const LabeledDataset& dataset);

/// precision = tp/(tp+fp), recall = tp/(tp+fn), F = 2pr/(p+r) (all 0 when
/// the denominator is 0), accuracy = (tp+tn)/total, Cohen's kappa =
/// (p_o - p_e)/(1 - p_e) with p_e from the row/column marginals (0 when
/// p_e = 1).
MeasureSet measures(const ConfusionMatrix& cm);

enum class SmoteOption { without, with_smote };
enum class FsKind { none, elimination, annealing };
enum class SmellsOption { absent, present };

std::string_view smote_option_name(SmoteOption option);
std::string_view fs_kind_name(FsKind kind);
std::optional<FsKind> fs_kind_from_name(std::string_view name);
std::string_view smells_option_name(SmellsOption option);

/// One cell of the experiment matrix: build the dataset variant, optionally
/// SMOTE, split, optionally select features on the training half, train,
/// evaluate on the held-out half.
struct ExperimentPlan {
    std::vector<ModelKind> classifiers{ModelKind::naive_bayes, ModelKind::pnn,
                                       ModelKind::random_forest};
    std::vector<SmoteOption> smote_options{SmoteOption::without, SmoteOption::with_smote};
    // Matches the reference report layout: annealing, elimination, none.
    std::vector<FsKind> fs_options{FsKind::annealing, FsKind::elimination, FsKind::none};
    std::vector<SmellsOption> smells_options{SmellsOption::absent, SmellsOption::present};

    SmoteConfig smote;
    ForestConfig forest;
    PnnConfig pnn;
    AnnealingSchedule annealing;
    double split_fraction = 0.5;
    ScoreKind fs_score = ScoreKind::f_measure;
    bool fs_on_full = false;       // compatibility: select on the pre-split dataset
    bool smote_train_only = false; // balance only the training half
    std::uint64_t master_seed = 0;
};

struct RunResult {
    ModelKind classifier = ModelKind::naive_bayes;
    SmoteOption smote = SmoteOption::without;
    FsKind fs = FsKind::none;
    SmellsOption smells = SmellsOption::absent;
    bool ok = false;
    std::string error;
    std::vector<std::string> selected_features;
    ConfusionMatrix cm;
    MeasureSet ms;
};

/// Runs every combination in the plan's cross product. Rows are ordered
/// classifier -> smote -> fs -> smells. Cell failures are recorded without
/// aborting the matrix. Each cell derives its RNG from (master_seed, cell
/// index), so results do not depend on `jobs`.
std::vector<RunResult> run_experiment_matrix(const LabeledDataset& with_smells,
                                             const LabeledDataset& without_smells,
                                             const ExperimentPlan& plan, std::size_t jobs = 1);

/// The three per-submodule dataset variants over the same file set.
struct SubmoduleTriple {
    std::string name;
    LabeledDataset file_metrics_only;
    LabeledDataset warnings_only;
    LabeledDataset combined;
};

struct StudyConfig {
    FsKind selector = FsKind::elimination; // used by the with-FS conditions
    SmoteConfig smote;
    ForestConfig forest; // the study trains random forests
    AnnealingSchedule annealing;
    double split_fraction = 0.5;
    ScoreKind fs_score = ScoreKind::f_measure;
    bool fs_on_full = false;
    bool smote_train_only = false;
    std::uint64_t master_seed = 0;
};

struct ConditionResult {
    SourceMix variant = SourceMix::combined;
    bool with_fs = false;
    std::vector<MeasureSet> per_submodule; // successful submodules only
    MeasureSet mean;
    MeasureSet stddev; // sample (n-1) standard deviation
    std::size_t failed = 0;
    std::vector<std::string> failures;
};

/// Conditions are ordered: the three variants without FS, then with FS.
struct StudyResult {
    std::vector<ConditionResult> conditions;
};

StudyResult run_submodule_study(const std::vector<SubmoduleTriple>& submodules,
                                const StudyConfig& config, std::size_t jobs = 1);

MeasureSet measure_mean(const std::vector<MeasureSet>& sets);
MeasureSet measure_stddev(const std::vector<MeasureSet>& sets); // n-1 denominator

} // namespace smellpred
