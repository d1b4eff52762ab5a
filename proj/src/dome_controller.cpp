#include "domepilot/dome_controller.hpp"

#include "domepilot/errors.hpp"
#include "csv.hpp"

#include <nlohmann/json.hpp>

#include <cerrno>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <fcntl.h>
#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

namespace domepilot::control {

std::string_view to_string(Cause cause) noexcept {
    switch (cause) {
    case Cause::model: return "model";
    case Cause::rain_override: return "rain_override";
    case Cause::temp_gate: return "temp_gate";
    case Cause::unmapped_condition: return "unmapped_condition";
    }
    return "model";
}

DomeCommand decide(Label model_prediction, const SensorFrame& frame, const TemperatureGate& gate) {
    if (frame.rain_detected) return DomeCommand::close(Cause::rain_override);
    if (!gate.admits(frame.observation.temp)) return DomeCommand::close(Cause::temp_gate);
    return model_prediction == 1 ? DomeCommand::open() : DomeCommand::close(Cause::model);
}

std::string signal_line(const DomeCommand& command) {
    std::string line = "D:0 A:0\n";
    line[2] = command.dome() == Dome::open ? '1' : '0';
    line[6] = command.ac() == Ac::on ? '1' : '0';
    return line;
}

Signal parse_signal(std::string_view line) {
    if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
    auto bit = [](char c) { return c == '0' || c == '1'; };
    if (line.size() != 7 || line.substr(0, 2) != "D:" || line.substr(3, 3) != " A:" || !bit(line[2]) ||
        !bit(line[6])) {
        throw InvalidArgument("malformed signal line \"" + std::string(line) + "\"");
    }
    Signal s{line[2] == '1' ? Dome::open : Dome::close, line[6] == '1' ? Ac::on : Ac::off};
    if ((s.dome == Dome::open) == (s.ac == Ac::on)) {
        throw InvalidArgument("signal line \"" + std::string(line) + "\" breaks the dome/AC interlock");
    }
    return s;
}

void StreamSink::write(std::string_view line) {
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.flush();
    if (!out_) throw SinkError("actuator stream rejected write");
}

namespace {

void write_all(int fd, std::string_view data, bool socket) {
    while (!data.empty()) {
        const auto n = socket ? ::send(fd, data.data(), data.size(), MSG_NOSIGNAL)
                              : ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            throw SinkError(std::string("actuator write failed: ") + std::strerror(errno));
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

} // namespace

FileSink::FileSink(const std::string& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw SinkError("cannot open actuator sink " + path + ": " + std::strerror(errno));
}

FileSink::~FileSink() {
    if (fd_ >= 0) ::close(fd_);
}

void FileSink::write(std::string_view line) { write_all(fd_, line, false); }

TcpSink::TcpSink(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const auto port_text = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), port_text.c_str(), &hints, &res); rc != 0) {
        throw SinkError("cannot resolve " + host + ": " + ::gai_strerror(rc));
    }
    for (auto* ai = res; ai != nullptr; ai = ai->ai_next) {
        fd_ = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (fd_ < 0) continue;
        if (::connect(fd_, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd_);
        fd_ = -1;
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) throw SinkError("cannot connect to " + host + ":" + port_text);
}

TcpSink::~TcpSink() {
    if (fd_ >= 0) ::close(fd_);
}

void TcpSink::write(std::string_view line) { write_all(fd_, line, true); }

std::unique_ptr<ActuatorSink> open_sink(const std::string& spec) {
    if (spec.rfind("tcp:", 0) == 0) {
        const auto rest = spec.substr(4);
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos || colon == 0) throw InvalidArgument("sink '" + spec + "': expected tcp:host:port");
        const auto port = detail::parse_number(rest.substr(colon + 1));
        if (!port || *port < 1 || *port > 65535 || *port != static_cast<double>(static_cast<int>(*port))) {
            throw InvalidArgument("sink '" + spec + "': bad port");
        }
        return std::make_unique<TcpSink>(rest.substr(0, colon), static_cast<std::uint16_t>(*port));
    }
    return std::make_unique<FileSink>(spec);
}

SignalAck emit_signal(const DomeCommand& command, ActuatorSink& sink) {
    const auto line = signal_line(command);
    sink.write(line);
    return {line.size()};
}

DecisionRecord decide_frame(const Predictor& predict, const SensorFrame& frame, const ConditionTable& table,
                            const TemperatureGate& gate) {
    DecisionRecord rec{frame, predict(frame.observation.features()), DomeCommand::close(Cause::model)};
    if (!frame.rain_detected && !table.contains(frame.observation.condition)) {
        rec.command = DomeCommand::close(Cause::unmapped_condition);
    } else {
        rec.command = decide(rec.prediction, frame, gate);
    }
    return rec;
}

DecisionLog replay(const Predictor& predict, std::span<const SensorFrame> frames, const ConditionTable& table,
                   const TemperatureGate& gate) {
    if (frames.empty()) throw InvalidArgument("replay: no frames");
    DecisionLog log;
    log.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (i > 0 && frames[i].tick <= frames[i - 1].tick) {
            throw InvalidArgument("replay: tick " + std::to_string(frames[i].tick) + " does not follow " +
                                  std::to_string(frames[i - 1].tick));
        }
        log.push_back(decide_frame(predict, frames[i], table, gate));
    }
    return log;
}

DomeController::DomeController(Predictor predict, const ConditionTable& table, ActuatorSink* sink,
                               TemperatureGate gate)
    : predict_(std::move(predict)), table_(table), sink_(sink), gate_(gate) {}

DomeController::StepResult DomeController::step(const SensorFrame& frame) {
    if (last_tick_ && frame.tick <= *last_tick_) {
        throw InvalidArgument("controller: tick " + std::to_string(frame.tick) + " does not follow " +
                              std::to_string(*last_tick_));
    }
    last_tick_ = frame.tick;
    StepResult result{decide_frame(predict_, frame, table_, gate_), false, {}};
    if (sink_ == nullptr) return result;
    try {
        emit_signal(result.record.command, *sink_);
        result.delivered = true;
        last_delivered_ = result.record.command;
    } catch (const SinkError& e) {
        result.error = e.what();
    }
    return result;
}

FrameReadResult read_frames(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::istringstream header_probe(text);
    std::string header;
    std::getline(header_probe, header);
    bool has_tick = false;
    for (const auto& h : detail::split_csv_line(header)) {
        if (normalize_condition(h) == "tick") has_tick = true;
    }

    std::vector<std::string> extra{"rain"};
    if (has_tick) extra.emplace_back("tick");
    std::vector<std::vector<std::string>> values;
    std::istringstream body(text);
    auto parsed = parse_dataset(body, extra, &values);

    FrameReadResult out;
    out.rejected = parsed.rejected;
    out.frames.reserve(parsed.observations.size());
    for (std::size_t i = 0; i < parsed.observations.size(); ++i) {
        const auto& rain = values[i][0];
        const auto r = normalize_condition(rain);
        bool rain_detected = false;
        if (r == "1" || r == "true") {
            rain_detected = true;
        } else if (r != "0" && r != "false") {
            throw SchemaError("frame " + std::to_string(i + 1) + ": rain must be 0 or 1, got \"" + rain + "\"");
        }
        std::uint64_t tick = i + 1;
        if (has_tick) {
            const auto t = detail::parse_number(values[i][1]);
            if (!t || *t < 0 || *t != static_cast<double>(static_cast<std::uint64_t>(*t))) {
                throw SchemaError("frame " + std::to_string(i + 1) + ": bad tick \"" + values[i][1] + "\"");
            }
            tick = static_cast<std::uint64_t>(*t);
        }
        out.frames.push_back({parsed.observations[i], rain_detected, tick});
    }
    return out;
}

std::string to_json_line(const DecisionRecord& record) {
    nlohmann::ordered_json j;
    j["tick"] = record.frame.tick;
    j["features"] = record.frame.observation.features();
    j["prediction"] = record.prediction;
    j["dome"] = static_cast<int>(record.command.dome());
    j["ac"] = static_cast<int>(record.command.ac());
    j["cause"] = std::string(to_string(record.command.cause()));
    return j.dump();
}

void write_decision_log(std::ostream& out, const DecisionLog& log) {
    for (const auto& rec : log) out << to_json_line(rec) << '\n';
}

} // namespace domepilot::control
