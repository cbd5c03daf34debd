#pragma once

#include <Eigen/Dense>

#include <array>
#include <chrono>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace ugvq {

// One row of the metadata CSV. Counts are nonnegative, duration is positive
// and channel_video is at least 1; ingestion enforces those ranges. Unknown
// numeric columns ride along as external scores (e.g. NR-metric outputs).
struct MetadataRecord {
    std::string item;
    std::int64_t max_resolution = 0;  // height in pixels
    std::chrono::year_month_day upload_date{};
    std::int64_t duration = 0;        // seconds
    std::int64_t viewcount = 0;
    std::int64_t like = 0;
    std::int64_t dislike = 0;
    std::int64_t comment = 0;
    std::int64_t description_length = 0; // characters
    std::int64_t subscribe = 0;
    std::int64_t channel_viewcount = 0;
    std::int64_t channel_comment = 0;
    std::int64_t channel_video = 0;
    std::int64_t channel_description_length = 0;
    std::map<std::string, double> external_scores;
};

constexpr int kMetricCount = 20;

// Fixed column order of the derived table.
const std::array<std::string, kMetricCount>& metric_names();

struct DerivedFeatureTable {
    std::vector<std::string> items;
    std::vector<std::string> columns;       // the 20 metric names
    Eigen::MatrixXd values;                 // items x 20
    std::vector<std::string> external_names;
    Eigen::MatrixXd external_values;        // items x external count
};

std::vector<MetadataRecord> ingest_metadata(std::istream& in);
std::vector<MetadataRecord> ingest_metadata_file(const std::string& path);

// Whole days from 2005-02-14 to the given date (negative before it).
std::int64_t days_since_platform_epoch(std::chrono::year_month_day date);

// Derives the 20 metadata metrics. Ratios with a zero denominator map to 0
// so the table always stays complete and finite.
DerivedFeatureTable derive_metrics(const std::vector<MetadataRecord>& records);

struct MetricRank {
    std::string name;
    int column;    // index into DerivedFeatureTable::columns
    double srocc;
};

// Metrics sorted by descending SROCC against the score vector; ties break
// by metric name. Metrics with no rank variance get SROCC 0.
std::vector<MetricRank> rank_metrics_by_srocc(const DerivedFeatureTable& table,
                                              const Eigen::VectorXd& mos);

void write_features_csv(const DerivedFeatureTable& table, std::ostream& out);
DerivedFeatureTable read_features_csv(std::istream& in);

} // namespace ugvq
