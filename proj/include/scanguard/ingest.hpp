#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scanguard/core.hpp"

namespace scanguard {

struct TransactionRecord {
    std::string store_id;
    std::string item_id;
    int week = 0;
    double unit_price = 0.0;
    double volume = 0.0;
};

// Maps logical fields to CSV header names.
struct ColumnMapping {
    std::string store = "store_id";
    std::string item = "item_id";
    std::string week = "week";
    std::string price = "price";
    std::string volume = "volume";
};

struct RowError {
    std::size_t line; // 1-based line number in the input
    std::string message;
};

struct ParseResult {
    std::vector<TransactionRecord> records;
    std::vector<RowError> errors; // malformed rows, not silently dropped
};

// Streaming parse of a comma-delimited UTF-8 file with a header row.
// Throws MissingColumn when a mapped column is absent; malformed rows are
// collected into the error report.
ParseResult parse_scanner_csv(std::istream& input, const ColumnMapping& mapping = {});

// Weekly aggregation for one (store, item): average price is total revenue /
// total units (volume-weighted); an unweighted mean of posted prices is
// available behind the flag.
PriceSeries weekly_series(const std::vector<TransactionRecord>& records,
                          const std::string& store_id, const std::string& item_id,
                          bool volume_weighted = true);

struct SplitSpec {
    std::function<bool(const std::string& store, int week)> train_filter;
    std::function<bool(const std::string& store, int week)> test_filter;
    bool drop_unchanged = false; // Tukey-filter both pools before fitting
    bool volume_weighted = true;
};

struct SplitResult {
    RatioSeries train_pool; // ratios pooled across all stores selected by train_filter
    RatioSeries test;       // single test store's contiguous series
    PriceSeries test_series; // weekly test series before ratio computation
};

SplitResult train_test_split(const std::vector<TransactionRecord>& records,
                             const std::string& item_id, const std::string& test_store,
                             const SplitSpec& spec);

// Distinct store ids present in the records, sorted.
std::vector<std::string> list_stores(const std::vector<TransactionRecord>& records);

} // namespace scanguard
