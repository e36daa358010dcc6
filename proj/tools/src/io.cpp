#include "ubcov_cli/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ubcov::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == ',' && !quoted) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    out.push_back(line.substr(start));
    return out;
}

bool parse_double(std::string_view cell, double& value) {
    cell = trim(cell);
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
        cell = trim(cell.substr(1, cell.size() - 2));
    }
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return false;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::vector<std::size_t> parse_integers(const std::string& text, const std::string& what) {
    const std::string_view body = trim(text);
    std::vector<std::size_t> out;
    if (!body.empty() && body.front() == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(what + ": invalid JSON array (" + e.what() + ")");
        }
        for (const auto& v : j) {
            if (!v.is_number_integer() || v.get<long long>() < 0) {
                throw InputError(what + ": entries must be nonnegative integers");
            }
            out.push_back(v.get<std::size_t>());
        }
        return out;
    }
    std::string token;
    std::istringstream in{std::string(body)};
    std::string chunk;
    while (in >> chunk) {
        std::replace(chunk.begin(), chunk.end(), ',', ' ');
        std::istringstream parts(chunk);
        while (parts >> token) {
            std::size_t v = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec != std::errc() || ptr != token.data() + token.size()) {
                throw InputError(what + ": '" + token + "' is not a nonnegative integer");
            }
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw InputError("failed writing '" + path + "'");
}

DataMatrix parse_csv(const std::string& text, bool header) {
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::size_t line_no = 0;
    std::size_t first_data_line = 0;
    std::istringstream in(text);
    std::string line;
    std::vector<std::size_t> blank_lines;
    while (std::getline(in, line)) {
        ++line_no;
        if (header && line_no == 1) continue;
        const std::string_view view = trim(line);
        if (view.empty()) {
            blank_lines.push_back(line_no);
            continue;
        }
        if (!blank_lines.empty()) {
            throw InputError("line " + std::to_string(blank_lines.front()) + ": empty row");
        }
        const auto fields = split_fields(line);
        if (rows.empty()) {
            width = fields.size();
            first_data_line = line_no;
        } else if (fields.size() != width) {
            throw InputError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(width) + " fields (as on line " +
                             std::to_string(first_data_line) + "), found " +
                             std::to_string(fields.size()));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (!parse_double(fields[c], row[c])) {
                throw InputError("line " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1) + ": '" + std::string(trim(fields[c])) +
                                 "' is not a number");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("data file contains no observations");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    try {
        return DataMatrix(std::move(m));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

DataMatrix load_data(const std::string& path, bool header) {
    const std::string text = read_file(path);
    try {
        return parse_csv(text, header);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

PartitionVector parse_partition(const std::string& text) {
    const std::vector<std::size_t> sizes = parse_integers(text, "partition");
    if (sizes.empty()) throw InputError("partition: no community sizes given");
    try {
        return PartitionVector(sizes);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("partition: ") + e.what());
    }
}

PartitionVector load_partition(const std::string& path) {
    try {
        return parse_partition(read_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::vector<std::size_t> load_permutation(const std::string& path, std::size_t count) {
    std::vector<std::size_t> order = parse_integers(read_file(path), path);
    if (order.size() != count) {
        throw InputError(path + ": permutation has " + std::to_string(order.size()) +
                         " entries, data has " + std::to_string(count) + " columns");
    }
    std::vector<bool> seen(count, false);
    for (std::size_t v : order) {
        if (v >= count || seen[v]) {
            throw InputError(path + ": not a permutation of 0.." + std::to_string(count - 1));
        }
        seen[v] = true;
    }
    return order;
}

DataMatrix permute_columns(const DataMatrix& x, const std::vector<std::size_t>& order) {
    Eigen::MatrixXd m(x.rows().rows(), static_cast<Eigen::Index>(order.size()));
    for (std::size_t c = 0; c < order.size(); ++c) {
        m.col(static_cast<Eigen::Index>(c)) = x.rows().col(static_cast<Eigen::Index>(order[c]));
    }
    return DataMatrix(std::move(m));
}

}  // namespace ubcov::cli
