#include "precursor/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <system_error>

namespace precursor::io {
namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    return in;
}

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

Flight parse_flight(const std::string& s, std::size_t line_no) {
    Flight v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw InputError(where(line_no) + "bad integer '" + s + "'");
    }
    return v;
}

double parse_real(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw InputError(where(line_no) + "bad number '" + s + "'");
    }
    return v;
}

void expect_header(const std::vector<std::string>& got, const std::vector<std::string>& want, std::size_t min_extra) {
    if (got.size() < want.size() + min_extra) {
        throw InputError(where(1) + "unexpected header");
    }
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (got[i] != want[i]) {
            throw InputError(where(1) + "expected column '" + want[i] + "', got '" + got[i] + "'");
        }
    }
}

struct PanelBuilder {
    std::vector<Flight> flights;
    std::vector<std::string> phases;
    std::vector<Value> values;
};

}  // namespace

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

Fleet read_telemetry(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("telemetry: empty input");
    }
    const auto header = split_csv_line(line);
    expect_header(header, {"unit_id", "flight", "phase"}, 0);
    const std::vector<std::string> columns(header.begin() + 3, header.end());
    const std::size_t p = columns.size();

    struct Row {
        Flight flight;
        std::string phase;
        std::vector<Value> cells;
    };
    std::map<std::string, std::vector<Row>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != p + 3) {
            throw InputError(where(line_no) + "expected " + std::to_string(p + 3) + " cells, got " +
                             std::to_string(cells.size()));
        }
        Row row{parse_flight(cells[1], line_no), cells[2], {}};
        row.cells.reserve(p);
        for (std::size_t c = 0; c < p; ++c) {
            const auto& s = cells[c + 3];
            row.cells.push_back(s.empty() ? Value{} : Value{parse_real(s, line_no)});
        }
        rows[cells[0]].push_back(std::move(row));
    }

    std::vector<TelemetryPanel> panels;
    for (auto& [unit, unit_rows] : rows) {
        std::stable_sort(unit_rows.begin(), unit_rows.end(),
                         [](const Row& a, const Row& b) { return a.flight < b.flight; });
        PanelBuilder b;
        for (auto& r : unit_rows) {
            b.flights.push_back(r.flight);
            b.phases.push_back(std::move(r.phase));
            for (auto& v : r.cells) b.values.push_back(v);
        }
        panels.emplace_back(unit, std::move(b.flights), std::move(b.phases), columns, std::move(b.values));
    }
    return make_fleet(std::move(panels));
}

Fleet read_telemetry_file(const std::string& path) {
    auto in = open_input(path);
    return read_telemetry(in);
}

void write_telemetry(std::ostream& out, const Fleet& fleet) {
    out << "unit_id,flight,phase";
    if (!fleet.empty()) {
        for (const auto& c : fleet.front().columns()) out << ',' << c;
    }
    out << '\n';
    for (const auto& panel : fleet) {
        for (std::size_t r = 0; r < panel.rows(); ++r) {
            out << panel.unit_id() << ',' << panel.flight(r) << ',' << panel.phases()[r];
            for (std::size_t c = 0; c < panel.cols(); ++c) {
                out << ',';
                if (const auto& v = panel.at(r, c)) out << format_real(*v);
            }
            out << '\n';
        }
    }
}

std::vector<EventRecord> read_events(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("events: empty input");
    }
    expect_header(split_csv_line(line), {"unit_id", "onset", "end", "code"}, 0);
    std::vector<EventRecord> events;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 4) {
            throw InputError(where(line_no) + "expected 4 cells");
        }
        EventRecord e{cells[0], parse_flight(cells[1], line_no), parse_flight(cells[2], line_no), cells[3]};
        if (e.end <= e.onset) {
            throw InputError(where(line_no) + "event end must exceed onset");
        }
        events.push_back(std::move(e));
    }
    return events;
}

std::vector<EventRecord> read_events_file(const std::string& path) {
    auto in = open_input(path);
    return read_events(in);
}

void write_events(std::ostream& out, const std::vector<EventRecord>& events) {
    out << "unit_id,onset,end,code\n";
    for (const auto& e : events) {
        out << e.unit_id << ',' << e.onset << ',' << e.end << ',' << e.code << '\n';
    }
}

std::vector<ScoreSeries> read_scores(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("scores: empty input");
    }
    expect_header(split_csv_line(line), {"unit_id", "flight", "score"}, 0);
    std::map<std::string, std::vector<std::pair<Flight, Value>>> by_unit;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 3) {
            throw InputError(where(line_no) + "expected 3 cells");
        }
        by_unit[cells[0]].emplace_back(parse_flight(cells[1], line_no),
                                       cells[2].empty() ? Value{} : Value{parse_real(cells[2], line_no)});
    }
    std::vector<ScoreSeries> out;
    for (auto& [unit, pts] : by_unit) {
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        ScoreSeries s{unit, {}, {}};
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i > 0 && pts[i].first == pts[i - 1].first) {
                throw InputError("scores: duplicate flight " + std::to_string(pts[i].first) + " for unit " + unit);
            }
            s.flights.push_back(pts[i].first);
            s.values.push_back(pts[i].second);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ScoreSeries> read_scores_file(const std::string& path) {
    auto in = open_input(path);
    return read_scores(in);
}

void write_scores(std::ostream& out, const std::vector<ScoreSeries>& scores) {
    out << "unit_id,flight,score\n";
    for (const auto& s : scores) {
        for (std::size_t i = 0; i < s.flights.size(); ++i) {
            out << s.unit_id << ',' << s.flights[i] << ',';
            if (s.values[i]) out << format_real(*s.values[i]);
            out << '\n';
        }
    }
}

void write_alarms(std::ostream& out, const std::vector<AlarmSeries>& alarms) {
    out << "unit_id,flight,alarm_id\n";
    for (const auto& a : alarms) {
        for (const auto& [unit, ts] : a.firings) {
            for (Flight t : ts) {
                out << unit << ',' << t << ',' << a.alarm_id << '\n';
            }
        }
    }
}

}  // namespace precursor::io
