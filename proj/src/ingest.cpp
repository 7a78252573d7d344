#include "scanguard/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace scanguard {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty())
        return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

bool parse_int(const std::string& s, int& out) {
    const std::string t = trim(s);
    if (t.empty())
        return false;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
        return false;
    out = static_cast<int>(v);
    return true;
}

} // namespace

ParseResult parse_scanner_csv(std::istream& input, const ColumnMapping& mapping) {
    std::string line;
    if (!std::getline(input, line))
        throw MissingColumn("input is empty, no header row");

    const std::vector<std::string> header = split_csv_line(line);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i)
        index[trim(header[i])] = i;

    auto column = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end())
            throw MissingColumn("missing required column: " + name);
        return it->second;
    };
    const std::size_t c_store = column(mapping.store);
    const std::size_t c_item = column(mapping.item);
    const std::size_t c_week = column(mapping.week);
    const std::size_t c_price = column(mapping.price);
    const std::size_t c_volume = column(mapping.volume);
    const std::size_t min_fields =
        1 + std::max({c_store, c_item, c_week, c_price, c_volume});

    ParseResult result;
    std::size_t line_no = 1;
    while (std::getline(input, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < min_fields) {
            result.errors.push_back({line_no, "too few fields"});
            continue;
        }
        TransactionRecord rec;
        rec.store_id = trim(fields[c_store]);
        rec.item_id = trim(fields[c_item]);
        if (!parse_int(fields[c_week], rec.week)) {
            result.errors.push_back({line_no, "non-integer week: " + fields[c_week]});
            continue;
        }
        if (!parse_double(fields[c_price], rec.unit_price)) {
            result.errors.push_back({line_no, "non-numeric price: " + fields[c_price]});
            continue;
        }
        if (!(rec.unit_price > 0.0)) {
            result.errors.push_back({line_no, "non-positive price: " + fields[c_price]});
            continue;
        }
        if (!parse_double(fields[c_volume], rec.volume)) {
            result.errors.push_back({line_no, "non-numeric volume: " + fields[c_volume]});
            continue;
        }
        if (!(rec.volume > 0.0)) {
            result.errors.push_back({line_no, "non-positive volume: " + fields[c_volume]});
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

PriceSeries weekly_series(const std::vector<TransactionRecord>& records,
                          const std::string& store_id, const std::string& item_id,
                          bool volume_weighted) {
    struct WeekAccum {
        double revenue = 0.0;
        double units = 0.0;
        double price_sum = 0.0;
        int n = 0;
    };
    std::map<int, WeekAccum> weeks;
    for (const auto& rec : records) {
        if (rec.store_id != store_id || rec.item_id != item_id)
            continue;
        WeekAccum& acc = weeks[rec.week];
        acc.revenue += rec.unit_price * rec.volume;
        acc.units += rec.volume;
        acc.price_sum += rec.unit_price;
        ++acc.n;
    }
    if (weeks.size() < 2)
        throw InsufficientWeeks("need at least 2 distinct weeks for " + store_id + "/" +
                                item_id + ", got " + std::to_string(weeks.size()));

    PriceSeries series;
    series.store_id = store_id;
    series.item_id = item_id;
    for (const auto& [week, acc] : weeks) {
        series.weeks.push_back(week);
        series.prices.push_back(volume_weighted ? acc.revenue / acc.units
                                                : acc.price_sum / acc.n);
        series.volumes.push_back(acc.units);
    }
    series.validate();
    return series;
}

SplitResult train_test_split(const std::vector<TransactionRecord>& records,
                             const std::string& item_id, const std::string& test_store,
                             const SplitSpec& spec) {
    if (!spec.train_filter || !spec.test_filter)
        throw InvalidConfig("both train and test filters must be set");

    SplitResult result;

    // Training pool: every store's ratio observations under the train filter.
    for (const std::string& store : list_stores(records)) {
        std::vector<TransactionRecord> selected;
        for (const auto& rec : records)
            if (rec.store_id == store && rec.item_id == item_id &&
                spec.train_filter(rec.store_id, rec.week))
                selected.push_back(rec);
        if (selected.empty())
            continue;
        try {
            const PriceSeries series =
                weekly_series(selected, store, item_id, spec.volume_weighted);
            result.train_pool.append(compute_ratios(series));
        } catch (const InsufficientWeeks&) {
            // single-week store contributes no ratios
        }
    }
    if (result.train_pool.empty())
        throw EmptySplit("train filter selected no usable data");

    std::vector<TransactionRecord> test_selected;
    for (const auto& rec : records)
        if (rec.store_id == test_store && rec.item_id == item_id &&
            spec.test_filter(rec.store_id, rec.week))
            test_selected.push_back(rec);
    if (test_selected.empty())
        throw EmptySplit("test filter selected no data for store " + test_store);
    result.test_series =
        weekly_series(test_selected, test_store, item_id, spec.volume_weighted);
    result.test = compute_ratios(result.test_series);

    if (spec.drop_unchanged) {
        result.train_pool = tukey_filter(result.train_pool);
        result.test = tukey_filter(result.test);
    }
    return result;
}

std::vector<std::string> list_stores(const std::vector<TransactionRecord>& records) {
    std::set<std::string> stores;
    for (const auto& rec : records)
        stores.insert(rec.store_id);
    return {stores.begin(), stores.end()};
}

} // namespace scanguard
