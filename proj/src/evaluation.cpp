#include "smellpred/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "smellpred/error.hpp"
#include "smellpred/rng.hpp"

namespace smellpred {

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& dataset,
                                                           double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        raise(errc::invalid_config, "split fraction must be in (0, 1)");
    }
    const std::size_t defect = dataset.count(Label::defect_prone);
    if (defect == 0 || defect == dataset.records.size()) {
        raise(errc::single_class, "stratified split needs both classes present");
    }

    std::vector<char> goes_to_train(dataset.records.size(), 0);
    Rng rng(seed);
    for (Label label : {Label::clean, Label::defect_prone}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < dataset.records.size(); ++i) {
            if (dataset.records[i].label == label) members.push_back(i);
        }
        rng.shuffle(members);
        const auto train_count = static_cast<std::size_t>(
            std::llround(fraction * static_cast<double>(members.size())));
        for (std::size_t i = 0; i < train_count; ++i) goes_to_train[members[i]] = 1;
    }

    LabeledDataset train, eval;
    for (LabeledDataset* half : {&train, &eval}) {
        half->feature_names = dataset.feature_names;
        half->source_mix = dataset.source_mix;
        half->filtered_generated = dataset.filtered_generated;
    }
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        (goes_to_train[i] ? train : eval).records.push_back(dataset.records[i]);
    }
    return {std::move(train), std::move(eval)};
}

ConfusionMatrix confusion(const TrainedModel& model, const LabeledDataset& dataset) {
    if (dataset.feature_names != model.feature_names) {
        raise(errc::schema_mismatch, "dataset features differ from the model's training schema");
    }
    ConfusionMatrix cm;
    for (const auto& record : dataset.records) {
        const Label predicted = predict(model, record.features);
        if (record.label == Label::defect_prone) {
            predicted == Label::defect_prone ? ++cm.tp : ++cm.fn;
        } else {
            predicted == Label::defect_prone ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

MeasureSet measures(const ConfusionMatrix& cm) {
    MeasureSet out;
    const double tp = static_cast<double>(cm.tp);
    const double fp = static_cast<double>(cm.fp);
    const double tn = static_cast<double>(cm.tn);
    const double fn = static_cast<double>(cm.fn);
    const double total = tp + fp + tn + fn;
    if (total == 0.0) return out;

    out.precision = (tp + fp) > 0.0 ? tp / (tp + fp) : 0.0;
    out.recall = (tp + fn) > 0.0 ? tp / (tp + fn) : 0.0;
    out.f_measure = (out.precision + out.recall) > 0.0
                        ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                        : 0.0;
    out.accuracy = (tp + tn) / total;
    const double expected = ((tp + fn) * (tp + fp) + (fp + tn) * (fn + tn)) / (total * total);
    out.kappa = expected == 1.0 ? 0.0 : (out.accuracy - expected) / (1.0 - expected);
    return out;
}

// ---------------------------------------------------------------------------
// Experiment matrix

std::string_view smote_option_name(SmoteOption option) {
    return option == SmoteOption::with_smote ? "with" : "without";
}

std::string_view fs_kind_name(FsKind kind) {
    switch (kind) {
        case FsKind::none: return "none";
        case FsKind::elimination: return "elimination";
        case FsKind::annealing: return "annealing";
    }
    return "none";
}

std::optional<FsKind> fs_kind_from_name(std::string_view name) {
    if (name == "none") return FsKind::none;
    if (name == "elimination") return FsKind::elimination;
    if (name == "annealing") return FsKind::annealing;
    return std::nullopt;
}

std::string_view smells_option_name(SmellsOption option) {
    return option == SmellsOption::present ? "present" : "absent";
}

namespace {

// Salts for the per-cell seed derivations.
constexpr std::uint64_t kSmoteSalt = 1;
constexpr std::uint64_t kSplitSalt = 2;
constexpr std::uint64_t kSelectSalt = 3;
constexpr std::uint64_t kWrapperSalt = 4;
constexpr std::uint64_t kTrainSalt = 5;

struct CellOutcome {
    std::vector<std::string> selected_features;
    ConfusionMatrix cm;
    MeasureSet ms;
};

struct CellSetup {
    ModelKind classifier;
    SmoteOption smote;
    FsKind fs;
    SmoteConfig smote_config;
    ForestConfig forest;
    PnnConfig pnn;
    AnnealingSchedule annealing;
    double split_fraction = 0.5;
    ScoreKind fs_score = ScoreKind::f_measure;
    bool fs_on_full = false;
    bool smote_train_only = false;
};

/// Shared by the matrix runner and the submodule study: SMOTE, split,
/// optional wrapper selection, train, evaluate.
CellOutcome run_cell(const LabeledDataset& variant, const CellSetup& setup,
                     std::uint64_t cell_seed) {
    CellOutcome outcome;

    ClassifierConfig classifier;
    classifier.kind = setup.classifier;
    classifier.forest = setup.forest;
    classifier.pnn = setup.pnn;
    classifier.forest.seed = derive_seed(cell_seed, kWrapperSalt);

    SmoteConfig smote_config = setup.smote_config;
    smote_config.seed = derive_seed(cell_seed, kSmoteSalt);
    const bool balance = setup.smote == SmoteOption::with_smote;

    // `whole` is the dataset the split consumes (balanced first unless
    // SMOTE is restricted to the training half).
    LabeledDataset whole = balance && !setup.smote_train_only
                               ? smote(variant, smote_config).dataset
                               : variant;
    auto [train, eval] =
        stratified_split(whole, setup.split_fraction, derive_seed(cell_seed, kSplitSalt));
    if (balance && setup.smote_train_only) train = smote(train, smote_config).dataset;

    FeatureMask mask = FeatureMask::all(variant.feature_names.size());
    if (setup.fs != FsKind::none) {
        WrapperEvaluator evaluator;
        evaluator.classifier = classifier;
        evaluator.split_fraction = setup.split_fraction;
        evaluator.score = setup.fs_score;
        evaluator.seed = derive_seed(cell_seed, kSelectSalt);
        // Default selects on the training half only; fs_on_full reproduces
        // the laxer whole-dataset protocol.
        const LabeledDataset& selection_data = setup.fs_on_full ? whole : train;
        AnnealingSchedule schedule = setup.annealing;
        schedule.seed = derive_seed(cell_seed, kSelectSalt);
        mask = setup.fs == FsKind::elimination
                   ? backward_elimination(selection_data, evaluator)
                   : simulated_annealing_select(selection_data, evaluator, schedule);
    }
    for (std::size_t f = 0; f < mask.size(); ++f) {
        if (mask.bits[f]) outcome.selected_features.push_back(variant.feature_names[f]);
    }

    classifier.forest.seed = derive_seed(cell_seed, kTrainSalt);
    const LabeledDataset masked_train = project_features(train, mask);
    const LabeledDataset masked_eval = project_features(eval, mask);
    const TrainedModel model = train_classifier(masked_train, classifier);
    outcome.cm = confusion(model, masked_eval);
    outcome.ms = measures(outcome.cm);
    return outcome;
}

/// Runs `count` jobs over a worker pool; job i is independent and results
/// are stored by index, so the output is identical for any pool size.
void run_jobs(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs - 1);
    for (std::size_t t = 0; t + 1 < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& thread : pool) thread.join();
}

} // namespace

std::vector<RunResult> run_experiment_matrix(const LabeledDataset& with_smells,
                                             const LabeledDataset& without_smells,
                                             const ExperimentPlan& plan, std::size_t jobs) {
    if (plan.classifiers.empty()) {
        raise(errc::invalid_config, "experiment plan needs at least one classifier");
    }

    std::vector<RunResult> results;
    for (ModelKind classifier : plan.classifiers) {
        for (SmoteOption smote_option : plan.smote_options) {
            for (FsKind fs : plan.fs_options) {
                for (SmellsOption smells : plan.smells_options) {
                    RunResult cell;
                    cell.classifier = classifier;
                    cell.smote = smote_option;
                    cell.fs = fs;
                    cell.smells = smells;
                    results.push_back(std::move(cell));
                }
            }
        }
    }

    run_jobs(results.size(), jobs, [&](std::size_t index) {
        RunResult& cell = results[index];
        const std::uint64_t cell_seed = derive_seed(plan.master_seed, index);
        const LabeledDataset& variant =
            cell.smells == SmellsOption::present ? with_smells : without_smells;
        CellSetup setup{cell.classifier, cell.smote,       cell.fs,
                        plan.smote,      plan.forest,      plan.pnn,
                        plan.annealing,  plan.split_fraction, plan.fs_score,
                        plan.fs_on_full, plan.smote_train_only};
        try {
            CellOutcome outcome = run_cell(variant, setup, cell_seed);
            cell.selected_features = std::move(outcome.selected_features);
            cell.cm = outcome.cm;
            cell.ms = outcome.ms;
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    });
    return results;
}

// ---------------------------------------------------------------------------
// Submodule study

MeasureSet measure_mean(const std::vector<MeasureSet>& sets) {
    MeasureSet mean;
    if (sets.empty()) return mean;
    for (const auto& set : sets) {
        mean.precision += set.precision;
        mean.recall += set.recall;
        mean.f_measure += set.f_measure;
        mean.accuracy += set.accuracy;
        mean.kappa += set.kappa;
    }
    const double n = static_cast<double>(sets.size());
    mean.precision /= n;
    mean.recall /= n;
    mean.f_measure /= n;
    mean.accuracy /= n;
    mean.kappa /= n;
    return mean;
}

MeasureSet measure_stddev(const std::vector<MeasureSet>& sets) {
    MeasureSet out;
    if (sets.size() < 2) return out;
    const MeasureSet mean = measure_mean(sets);
    for (const auto& set : sets) {
        const auto add_sq = [](double& acc, double value, double mu) {
            acc += (value - mu) * (value - mu);
        };
        add_sq(out.precision, set.precision, mean.precision);
        add_sq(out.recall, set.recall, mean.recall);
        add_sq(out.f_measure, set.f_measure, mean.f_measure);
        add_sq(out.accuracy, set.accuracy, mean.accuracy);
        add_sq(out.kappa, set.kappa, mean.kappa);
    }
    const double n1 = static_cast<double>(sets.size() - 1);
    out.precision = std::sqrt(out.precision / n1);
    out.recall = std::sqrt(out.recall / n1);
    out.f_measure = std::sqrt(out.f_measure / n1);
    out.accuracy = std::sqrt(out.accuracy / n1);
    out.kappa = std::sqrt(out.kappa / n1);
    return out;
}

StudyResult run_submodule_study(const std::vector<SubmoduleTriple>& submodules,
                                const StudyConfig& config, std::size_t jobs) {
    if (submodules.size() < 2) {
        raise(errc::invalid_config, "the study needs at least two submodules");
    }

    struct Condition {
        SourceMix variant;
        bool with_fs;
    };
    const std::vector<Condition> conditions = {
        {SourceMix::file_metrics_only, false}, {SourceMix::warnings_only, false},
        {SourceMix::combined, false},          {SourceMix::file_metrics_only, true},
        {SourceMix::warnings_only, true},      {SourceMix::combined, true},
    };

    struct Slot {
        bool ok = false;
        std::string error;
        MeasureSet ms;
    };
    std::vector<Slot> slots(conditions.size() * submodules.size());

    run_jobs(slots.size(), jobs, [&](std::size_t index) {
        const std::size_t c = index / submodules.size();
        const std::size_t s = index % submodules.size();
        const Condition& condition = conditions[c];
        const SubmoduleTriple& triple = submodules[s];
        const LabeledDataset& variant = condition.variant == SourceMix::combined
                                            ? triple.combined
                                            : (condition.variant == SourceMix::warnings_only
                                                   ? triple.warnings_only
                                                   : triple.file_metrics_only);
        CellSetup setup{ModelKind::random_forest,
                        SmoteOption::with_smote,
                        condition.with_fs ? config.selector : FsKind::none,
                        config.smote,
                        config.forest,
                        PnnConfig{},
                        config.annealing,
                        config.split_fraction,
                        config.fs_score,
                        config.fs_on_full,
                        config.smote_train_only};
        try {
            // The seed depends on the condition only, so equal submodule
            // data is processed identically (equal inputs, equal measures).
            slots[index].ms = run_cell(variant, setup, derive_seed(config.master_seed, c)).ms;
            slots[index].ok = true;
        } catch (const std::exception& e) {
            slots[index].error = e.what();
        }
    });

    StudyResult study;
    for (std::size_t c = 0; c < conditions.size(); ++c) {
        ConditionResult condition;
        condition.variant = conditions[c].variant;
        condition.with_fs = conditions[c].with_fs;
        for (std::size_t s = 0; s < submodules.size(); ++s) {
            const Slot& slot = slots[c * submodules.size() + s];
            if (slot.ok) {
                condition.per_submodule.push_back(slot.ms);
            } else {
                ++condition.failed;
                condition.failures.push_back(submodules[s].name + ": " + slot.error);
            }
        }
        condition.mean = measure_mean(condition.per_submodule);
        condition.stddev = measure_stddev(condition.per_submodule);
        study.conditions.push_back(std::move(condition));
    }
    return study;
}

} // namespace smellpred
