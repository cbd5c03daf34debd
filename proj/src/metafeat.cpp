#include "ugvq/metafeat.hpp"

#include "ugvq/csv.hpp"
#include "ugvq/errors.hpp"
#include "ugvq/io.hpp"
#include "ugvq/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace ugvq {

const std::array<std::string, kMetricCount>& metric_names() {
    static const std::array<std::string, kMetricCount> names = {
        "Description length",
        "#like/#view",
        "Max resolution",
        "#subscribe",
        "#subscribe/#channel video",
        "#like",
        "#dislike",
        "#channel viewcount",
        "#viewcount",
        "#comment",
        "#like/date",
        "Channel description length",
        "#channel viewcount/#channel video",
        "Date",
        "#view/date",
        "#channel comment",
        "#comment/#view",
        "#channel video",
        "#channel comment/#channel video",
        "Duration",
    };
    return names;
}

namespace {

const std::vector<std::string>& schema_columns() {
    static const std::vector<std::string> cols = {
        "item",       "max_resolution",  "upload_date",     "duration",
        "viewcount",  "like",            "dislike",         "comment",
        "description_length", "subscribe", "channel_viewcount", "channel_comment",
        "channel_video", "channel_description_length",
    };
    return cols;
}

std::int64_t parse_int_field(const std::string& column, const std::string& value,
                             std::int64_t min_allowed) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw NonNumericValue(column, value);
    }
    if (v < min_allowed) throw NonNumericValue(column, value);
    return v;
}

bool parse_double(const std::string& value, double& out) {
    char* end = nullptr;
    const char* start = value.c_str();
    out = std::strtod(start, &end);
    return end == start + value.size() && !value.empty() && std::isfinite(out);
}

std::chrono::year_month_day parse_iso_date(const std::string& column, const std::string& value) {
    // Strict YYYY-MM-DD.
    if (value.size() != 10 || value[4] != '-' || value[7] != '-') {
        throw NonNumericValue(column, value);
    }
    auto digits = [&](int from, int to) {
        int v = 0;
        for (int i = from; i < to; ++i) {
            if (value[i] < '0' || value[i] > '9') throw NonNumericValue(column, value);
            v = v * 10 + (value[i] - '0');
        }
        return v;
    };
    std::chrono::year_month_day ymd{std::chrono::year{digits(0, 4)},
                                    std::chrono::month{static_cast<unsigned>(digits(5, 7))},
                                    std::chrono::day{static_cast<unsigned>(digits(8, 10))}};
    if (!ymd.ok()) throw NonNumericValue(column, value);
    return ymd;
}

} // namespace

std::vector<MetadataRecord> ingest_metadata(std::istream& in) {
    CsvTable table = read_csv(in);

    std::vector<int> schema_idx;
    for (const auto& name : schema_columns()) {
        int idx = table.column(name);
        if (idx < 0) throw MissingColumn(name);
        schema_idx.push_back(idx);
    }

    // Extra columns become external scores when every row parses as a number.
    std::vector<std::pair<std::string, int>> extra;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const std::string& name = table.header[c];
        if (std::find(schema_columns().begin(), schema_columns().end(), name) ==
            schema_columns().end()) {
            bool numeric = true;
            for (const auto& row : table.rows) {
                double v;
                if (!parse_double(row[c], v)) { numeric = false; break; }
            }
            if (numeric) extra.push_back({name, static_cast<int>(c)});
        }
    }

    std::vector<MetadataRecord> records;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        MetadataRecord r;
        int f = 0;
        r.item = row[schema_idx[f++]];
        if (!seen.insert(r.item).second) throw DuplicateItem(r.item);
        r.max_resolution = parse_int_field("max_resolution", row[schema_idx[f++]], 0);
        r.upload_date = parse_iso_date("upload_date", row[schema_idx[f++]]);
        r.duration = parse_int_field("duration", row[schema_idx[f++]], 1);
        r.viewcount = parse_int_field("viewcount", row[schema_idx[f++]], 0);
        r.like = parse_int_field("like", row[schema_idx[f++]], 0);
        r.dislike = parse_int_field("dislike", row[schema_idx[f++]], 0);
        r.comment = parse_int_field("comment", row[schema_idx[f++]], 0);
        r.description_length = parse_int_field("description_length", row[schema_idx[f++]], 0);
        r.subscribe = parse_int_field("subscribe", row[schema_idx[f++]], 0);
        r.channel_viewcount = parse_int_field("channel_viewcount", row[schema_idx[f++]], 0);
        r.channel_comment = parse_int_field("channel_comment", row[schema_idx[f++]], 0);
        r.channel_video = parse_int_field("channel_video", row[schema_idx[f++]], 1);
        r.channel_description_length =
            parse_int_field("channel_description_length", row[schema_idx[f++]], 0);
        for (const auto& [name, col] : extra) {
            double v = 0.0;
            parse_double(row[col], v);
            r.external_scores[name] = v;
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<MetadataRecord> ingest_metadata_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return ingest_metadata(in);
}

std::int64_t days_since_platform_epoch(std::chrono::year_month_day date) {
    using namespace std::chrono;
    static constexpr year_month_day epoch{year{2005}, month{2}, day{14}};
    return (sys_days(date) - sys_days(epoch)).count();
}

namespace {

double ratio_or_zero(double numerator, double denominator) {
    return denominator == 0.0 ? 0.0 : numerator / denominator;
}

} // namespace

DerivedFeatureTable derive_metrics(const std::vector<MetadataRecord>& records) {
    if (records.empty()) throw EmptyData("no metadata records to derive metrics from");

    DerivedFeatureTable table;
    table.columns.assign(metric_names().begin(), metric_names().end());
    table.values.resize(static_cast<Eigen::Index>(records.size()), kMetricCount);

    // External columns: union over records, name-sorted; missing entries 0.
    std::set<std::string> ext_names;
    for (const auto& r : records) {
        for (const auto& [name, v] : r.external_scores) ext_names.insert(name);
    }
    table.external_names.assign(ext_names.begin(), ext_names.end());
    table.external_values =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(records.size()),
                              static_cast<Eigen::Index>(table.external_names.size()));

    for (Eigen::Index row = 0; row < static_cast<Eigen::Index>(records.size()); ++row) {
        const MetadataRecord& r = records[row];
        table.items.push_back(r.item);
        double date = static_cast<double>(days_since_platform_epoch(r.upload_date));
        double view = static_cast<double>(r.viewcount);
        double like = static_cast<double>(r.like);
        double chan_video = static_cast<double>(r.channel_video);

        int c = 0;
        table.values(row, c++) = static_cast<double>(r.description_length);
        table.values(row, c++) = ratio_or_zero(like, view);
        table.values(row, c++) = static_cast<double>(r.max_resolution);
        table.values(row, c++) = static_cast<double>(r.subscribe);
        table.values(row, c++) = ratio_or_zero(static_cast<double>(r.subscribe), chan_video);
        table.values(row, c++) = like;
        table.values(row, c++) = static_cast<double>(r.dislike);
        table.values(row, c++) = static_cast<double>(r.channel_viewcount);
        table.values(row, c++) = view;
        table.values(row, c++) = static_cast<double>(r.comment);
        table.values(row, c++) = ratio_or_zero(like, date);
        table.values(row, c++) = static_cast<double>(r.channel_description_length);
        table.values(row, c++) = ratio_or_zero(static_cast<double>(r.channel_viewcount), chan_video);
        table.values(row, c++) = date;
        table.values(row, c++) = ratio_or_zero(view, date);
        table.values(row, c++) = static_cast<double>(r.channel_comment);
        table.values(row, c++) = ratio_or_zero(static_cast<double>(r.comment), view);
        table.values(row, c++) = chan_video;
        table.values(row, c++) = ratio_or_zero(static_cast<double>(r.channel_comment), chan_video);
        table.values(row, c++) = static_cast<double>(r.duration);

        for (Eigen::Index e = 0; e < static_cast<Eigen::Index>(table.external_names.size()); ++e) {
            auto it = r.external_scores.find(table.external_names[e]);
            if (it != r.external_scores.end()) table.external_values(row, e) = it->second;
        }
    }
    return table;
}

std::vector<MetricRank> rank_metrics_by_srocc(const DerivedFeatureTable& table,
                                              const Eigen::VectorXd& mos) {
    if (static_cast<std::size_t>(mos.size()) != table.items.size()) {
        throw LengthMismatch(table.items.size(), static_cast<std::size_t>(mos.size()));
    }
    std::vector<double> mos_vec(mos.data(), mos.data() + mos.size());
    std::vector<MetricRank> ranks;
    for (int c = 0; c < kMetricCount; ++c) {
        std::vector<double> col(table.values.rows());
        for (Eigen::Index i = 0; i < table.values.rows(); ++i) col[i] = table.values(i, c);
        double rho;
        try {
            rho = srocc(col, mos_vec);
        } catch (const DegenerateInput&) {
            rho = 0.0; // constant column carries no rank information
        }
        ranks.push_back({table.columns[c], c, rho});
    }
    std::sort(ranks.begin(), ranks.end(), [](const MetricRank& a, const MetricRank& b) {
        if (a.srocc != b.srocc) return a.srocc > b.srocc;
        return a.name < b.name;
    });
    return ranks;
}

void write_features_csv(const DerivedFeatureTable& table, std::ostream& out) {
    out << "item";
    for (const auto& name : table.columns) out << ',' << name;
    for (const auto& name : table.external_names) out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(table.items.size()); ++i) {
        out << table.items[i];
        for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
            out << ',' << format_double(table.values(i, c));
        }
        for (Eigen::Index c = 0; c < table.external_values.cols(); ++c) {
            out << ',' << format_double(table.external_values(i, c));
        }
        out << '\n';
    }
}

DerivedFeatureTable read_features_csv(std::istream& in) {
    CsvTable csv = read_csv(in);
    if (csv.header.empty() || csv.header[0] != "item") {
        throw ParseError("features CSV must start with an 'item' column");
    }
    const auto& names = metric_names();
    if (csv.header.size() < 1 + names.size()) throw ParseError("features CSV is missing metric columns");
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (csv.header[1 + c] != names[c]) {
            throw ParseError("unexpected metric column '" + csv.header[1 + c] + "'");
        }
    }
    DerivedFeatureTable table;
    table.columns.assign(names.begin(), names.end());
    for (std::size_t c = 1 + names.size(); c < csv.header.size(); ++c) {
        table.external_names.push_back(csv.header[c]);
    }
    table.values.resize(static_cast<Eigen::Index>(csv.rows.size()), kMetricCount);
    table.external_values.resize(static_cast<Eigen::Index>(csv.rows.size()),
                                 static_cast<Eigen::Index>(table.external_names.size()));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(csv.rows.size()); ++i) {
        const auto& row = csv.rows[i];
        table.items.push_back(row[0]);
        for (int c = 0; c < kMetricCount; ++c) {
            double v;
            if (!parse_double(row[1 + c], v)) throw NonNumericValue(table.columns[c], row[1 + c]);
            table.values(i, c) = v;
        }
        for (Eigen::Index c = 0; c < table.external_values.cols(); ++c) {
            double v;
            if (!parse_double(row[1 + kMetricCount + c], v)) {
                throw NonNumericValue(table.external_names[c], row[1 + kMetricCount + c]);
            }
            table.external_values(i, c) = v;
        }
    }
    return table;
}

} // namespace ugvq
