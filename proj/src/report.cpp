#include "smellpred/report.hpp"

#include <algorithm>

#include "smellpred/text.hpp"

namespace smellpred {

namespace {

const char* fs_label(bool with_fs) { return with_fs ? "with_fs" : "without_fs"; }

nlohmann::json measures_json(const MeasureSet& ms) {
    return {{"precision", ms.precision},
            {"recall", ms.recall},
            {"f_measure", ms.f_measure},
            {"accuracy", ms.accuracy},
            {"kappa", ms.kappa}};
}

} // namespace

std::string experiment_results_csv(const std::vector<RunResult>& results) {
    std::string out = "classifier,smote,feature_selection,bad_smells,f_measure,tp,fp,tn,fn,status\n";
    for (const auto& cell : results) {
        out += std::string(model_kind_name(cell.classifier)) + "," +
               std::string(smote_option_name(cell.smote)) + "," +
               std::string(fs_kind_name(cell.fs)) + "," +
               std::string(smells_option_name(cell.smells)) + ",";
        if (cell.ok) {
            out += format_fixed(cell.ms.f_measure, 4) + "," + std::to_string(cell.cm.tp) + "," +
                   std::to_string(cell.cm.fp) + "," + std::to_string(cell.cm.tn) + "," +
                   std::to_string(cell.cm.fn) + ",ok\n";
        } else {
            out += ",,,,,error\n";
        }
    }
    return out;
}

nlohmann::json experiment_results_json(const std::vector<RunResult>& results) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& cell : results) {
        nlohmann::json row = {
            {"classifier", std::string(model_kind_name(cell.classifier))},
            {"smote", std::string(smote_option_name(cell.smote))},
            {"feature_selection", std::string(fs_kind_name(cell.fs))},
            {"bad_smells", std::string(smells_option_name(cell.smells))},
            {"ok", cell.ok},
        };
        if (cell.ok) {
            row["confusion"] = {{"tp", cell.cm.tp},
                                {"fp", cell.cm.fp},
                                {"tn", cell.cm.tn},
                                {"fn", cell.cm.fn}};
            row["measures"] = measures_json(cell.ms);
            row["selected_features"] = cell.selected_features;
        } else {
            row["error"] = cell.error;
        }
        rows.push_back(std::move(row));
    }
    return {{"results", std::move(rows)}};
}

std::string best_cell_summary(const std::vector<RunResult>& results) {
    const RunResult* best = nullptr;
    for (const auto& cell : results) {
        if (cell.ok && (!best || cell.ms.f_measure > best->ms.f_measure)) best = &cell;
    }
    if (!best) return "no successful experiment cells";
    return "best cell: classifier=" + std::string(model_kind_name(best->classifier)) +
           " smote=" + std::string(smote_option_name(best->smote)) +
           " feature_selection=" + std::string(fs_kind_name(best->fs)) +
           " bad_smells=" + std::string(smells_option_name(best->smells)) +
           " f_measure=" + format_fixed(best->ms.f_measure, 4);
}

std::string study_results_csv(const StudyResult& study) {
    std::string out = "dataset,feature_selection,measure,mean,std_deviation\n";
    for (const auto& condition : study.conditions) {
        const std::string prefix = std::string(source_mix_name(condition.variant)) + "," +
                                   fs_label(condition.with_fs) + ",";
        const auto row = [&](const char* measure, double mean, double stddev) {
            out += prefix;
            out += measure;
            out += "," + format_fixed(mean, 4) + "," + format_fixed(stddev, 4) + "\n";
        };
        row("accuracy", condition.mean.accuracy, condition.stddev.accuracy);
        row("kappa", condition.mean.kappa, condition.stddev.kappa);
        row("recall", condition.mean.recall, condition.stddev.recall);
        row("f_measure", condition.mean.f_measure, condition.stddev.f_measure);
    }
    return out;
}

nlohmann::json study_results_json(const StudyResult& study) {
    nlohmann::json conditions = nlohmann::json::array();
    for (const auto& condition : study.conditions) {
        nlohmann::json submodules = nlohmann::json::array();
        for (const auto& ms : condition.per_submodule) submodules.push_back(measures_json(ms));
        conditions.push_back({
            {"dataset", std::string(source_mix_name(condition.variant))},
            {"feature_selection", fs_label(condition.with_fs)},
            {"mean", measures_json(condition.mean)},
            {"std_deviation", measures_json(condition.stddev)},
            {"submodules", std::move(submodules)},
            {"failed", condition.failed},
            {"failures", condition.failures},
        });
    }
    return {{"conditions", std::move(conditions)}};
}

nlohmann::json join_report_json(const JoinReport& report) {
    return {{"matched", report.matched},
            {"unmatched_file_metrics", report.unmatched_file_metrics},
            {"unmatched_warnings", report.unmatched_warnings}};
}

} // namespace smellpred
