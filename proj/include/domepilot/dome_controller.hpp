#pragma once

#include "domepilot/condition_table.hpp"
#include "domepilot/weather_data.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace domepilot::control {

enum class Dome { close = 0, open = 1 };
enum class Ac { off = 0, on = 1 };
enum class Cause { model, rain_override, temp_gate, unmapped_condition };

std::string_view to_string(Cause cause) noexcept;

struct SensorFrame {
    WeatherObservation observation;
    bool rain_detected = false;
    std::uint64_t tick = 0; // strictly increasing within a session
};

// Dome/AC pair for one decision. The air conditioner always runs exactly when
// the dome is closed, so only the dome state and the cause are chosen.
class DomeCommand {
public:
    static DomeCommand open() { return DomeCommand(Dome::open, Cause::model); }
    static DomeCommand close(Cause cause) { return DomeCommand(Dome::close, cause); }

    Dome dome() const noexcept { return dome_; }
    Ac ac() const noexcept { return dome_ == Dome::open ? Ac::off : Ac::on; }
    Cause cause() const noexcept { return cause_; }

    friend bool operator==(const DomeCommand&, const DomeCommand&) = default;

private:
    DomeCommand(Dome dome, Cause cause) : dome_(dome), cause_(cause) {}

    Dome dome_;
    Cause cause_;
};

// Rain closes first, then the temperature gate, otherwise the model decides.
// `model_prediction` values other than 1 are treated as close.
DomeCommand decide(Label model_prediction, const SensorFrame& frame, const TemperatureGate& gate = {});

// Wire protocol: one ASCII line `D:<0|1> A:<0|1>\n`.
std::string signal_line(const DomeCommand& command);

struct Signal {
    Dome dome = Dome::close;
    Ac ac = Ac::on;

    friend bool operator==(const Signal&, const Signal&) = default;
};

// Parses one protocol line (the trailing newline is optional). Throws
// InvalidArgument on malformed input or a dome/AC pair that breaks the interlock.
Signal parse_signal(std::string_view line);

// Destination for protocol lines. write() either delivers the whole line or
// throws SinkError.
class ActuatorSink {
public:
    virtual ~ActuatorSink() = default;
    virtual void write(std::string_view line) = 0;
};

class StreamSink final : public ActuatorSink {
public:
    explicit StreamSink(std::ostream& out) : out_(out) {}
    void write(std::string_view line) override;

private:
    std::ostream& out_;
};

// Appends to a file or named pipe; flushed after each line.
class FileSink final : public ActuatorSink {
public:
    explicit FileSink(const std::string& path);
    ~FileSink() override;
    FileSink(const FileSink&) = delete;
    FileSink& operator=(const FileSink&) = delete;
    void write(std::string_view line) override;

private:
    std::string path_;
    int fd_ = -1;
};

// Blocking TCP client; connects on construction.
class TcpSink final : public ActuatorSink {
public:
    TcpSink(const std::string& host, std::uint16_t port);
    ~TcpSink() override;
    TcpSink(const TcpSink&) = delete;
    TcpSink& operator=(const TcpSink&) = delete;
    void write(std::string_view line) override;

private:
    int fd_ = -1;
};

// "tcp:host:port" -> TcpSink, anything else -> FileSink.
std::unique_ptr<ActuatorSink> open_sink(const std::string& spec);

struct SignalAck {
    std::size_t bytes = 0;
};

// Writes the command's protocol line. Throws SinkError on failure; resending
// the same command later is safe.
SignalAck emit_signal(const DomeCommand& command, ActuatorSink& sink);

using Predictor = std::function<Label(const Features&)>;

struct DecisionRecord {
    SensorFrame frame;
    Label prediction = 0;
    DomeCommand command = DomeCommand::close(Cause::model);
};

using DecisionLog = std::vector<DecisionRecord>;

// Decides one frame: unmapped weather descriptions close the dome unless rain
// already did.
DecisionRecord decide_frame(const Predictor& predict, const SensorFrame& frame, const ConditionTable& table,
                            const TemperatureGate& gate = {});

// Offline run of the control loop. Throws InvalidArgument on an empty frame
// list or non-increasing ticks.
DecisionLog replay(const Predictor& predict, std::span<const SensorFrame> frames, const ConditionTable& table,
                   const TemperatureGate& gate = {});

// Single-writer loop over live frames: decides, then pushes the command to the
// sink. A failed write is reported in the result and leaves the last delivered
// command untouched; the next frame tries again.
class DomeController {
public:
    struct StepResult {
        DecisionRecord record;
        bool delivered = false;
        std::string error;
    };

    DomeController(Predictor predict, const ConditionTable& table, ActuatorSink* sink, TemperatureGate gate = {});

    StepResult step(const SensorFrame& frame);

    const std::optional<DomeCommand>& last_delivered() const noexcept { return last_delivered_; }

private:
    Predictor predict_;
    const ConditionTable& table_;
    ActuatorSink* sink_;
    TemperatureGate gate_;
    std::optional<std::uint64_t> last_tick_;
    std::optional<DomeCommand> last_delivered_;
};

// Frame CSV: the weather schema plus a `rain` column (0/1). An optional
// `tick` column supplies timestamps; otherwise rows are numbered from 1.
struct FrameReadResult {
    std::vector<SensorFrame> frames;
    std::size_t rejected = 0;
};
FrameReadResult read_frames(std::istream& in);

// {"tick":..,"features":[..],"prediction":..,"dome":..,"ac":..,"cause":".."}
std::string to_json_line(const DecisionRecord& record);
void write_decision_log(std::ostream& out, const DecisionLog& log);

} // namespace domepilot::control
