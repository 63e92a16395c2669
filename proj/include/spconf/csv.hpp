#ifndef SPCONF_CSV_HPP
#define SPCONF_CSV_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "spconf/bias.hpp"
#include "spconf/experiments.hpp"
#include "spconf/mcmc.hpp"
#include "spconf/surface.hpp"

namespace spconf::csv {

// Doubles are serialized with 17 significant digits so a write/read
// round-trip reproduces the exact bits.
std::string format_double(double v);

using Cell = std::variant<double, long, std::string>;
using Row = std::vector<Cell>;

enum class Schema { Surface, ErrorTable, Summary, BiasReport, McmcTrace };

const std::vector<std::string>& header(Schema schema);

// UTF-8, comma separated, header row first, rows emitted in input order.
// Row arity must match the schema header; string cells must be free of
// commas, quotes, and newlines.
void emit_csv(const std::vector<Row>& rows, Schema schema,
              const std::filesystem::path& path);

std::vector<Row> rows_from(const SurfaceResult& surface);
std::vector<Row> rows_from(const ErrorTable& table);
std::vector<Row> rows_from(const std::vector<SummaryRow>& summary);
std::vector<Row> rows_from(const BiasReport& report);
std::vector<Row> rows_from_chain(const MCMCChain& chain);

} // namespace spconf::csv

#endif
