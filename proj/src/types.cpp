#include "burstgate/types.hpp"

namespace burstgate {

const char* to_string(FlowKind kind) {
    switch (kind) {
    case FlowKind::voip: return "voip";
    case FlowKind::camera: return "camera";
    case FlowKind::trace: return "trace";
    case FlowKind::synth_vc: return "synth_vc";
    }
    return "?";
}

const char* to_string(BufferMode mode) {
    return mode == BufferMode::packets ? "packets" : "bytes";
}

} // namespace burstgate
