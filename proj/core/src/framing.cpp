#include "ssk/framing.hpp"

#include <algorithm>

namespace ssk {

void FramePlan::validate() const {
  if (codebook == nullptr) throw Error("frame plan: codebook missing");
  if (frame_bits < codebook->max_len())
    throw Error("frame plan: frame size below the longest codeword");
}

FrameEncoding frame_to_symbols(const FramePlan& plan, const BitString& frame,
                               const BitString& next_bits) {
  plan.validate();
  if (static_cast<int>(frame.size()) != plan.frame_bits)
    throw Error("frame_to_symbols: frame length != F");

  auto [symbols, consumed] = plan.codebook->decode(frame);
  FrameEncoding enc{std::move(symbols), 0};
  if (consumed == frame.size()) return enc;

  // Residual fragment: borrow next-frame bits until exactly one more
  // codeword completes. The codebook is complete, so at most L_max - 1
  // borrowed bits are ever needed; zero-pad past the end of the stream.
  BitString tail = frame.substr(consumed);
  const std::size_t fragment = tail.size();
  for (std::size_t k = 0;; ++k) {
    tail.push_back(k < next_bits.size() ? next_bits[k] : '0');
    auto [more, used] = plan.codebook->decode(tail);
    if (!more.empty()) {
      enc.symbols.push_back(more.front());
      enc.borrowed = static_cast<int>(tail.size() - fragment);
      return enc;
    }
    if (tail.size() > static_cast<std::size_t>(plan.l_max()))
      throw Error("frame_to_symbols: fragment failed to complete within L_max bits");
  }
}

FrameVerdict symbols_to_frame(const FramePlan& plan, std::span<const std::size_t> detected,
                              const BitString& true_frame) {
  plan.validate();
  const int f = plan.frame_bits;

  const BitString recovered = plan.codebook->encode(detected);
  FrameVerdict v;
  v.recovered_bits = static_cast<int>(recovered.size());
  v.ed_flag = v.recovered_bits < f || v.recovered_bits > f + plan.l_max() - 1;

  // Payload is the first F recovered bits; missing tail bits count as wrong.
  for (int b = 0; b < f; ++b) {
    const bool missing = b >= v.recovered_bits;
    if (missing || recovered[b] != true_frame[b]) ++v.bit_errors;
  }
  v.frame_error = v.bit_errors > 0;
  return v;
}

FrameVerdict run_arq(const FramePlan& plan, const SymbolLink& link, const BitString& frame,
                     const BitString& next_bits, ArqMode mode) {
  const FrameEncoding enc = frame_to_symbols(plan, frame, next_bits);
  const std::vector<std::size_t> detected = link(enc.symbols);
  FrameVerdict v = symbols_to_frame(plan, detected, frame);
  if (!v.ed_flag || mode == ArqMode::off) return v;

  if (mode == ArqMode::paper) {
    v.frame_error = false;
    v.bit_errors = 0;
    return v;
  }
  // One real retransmission of the same symbols, independently detected.
  const std::vector<std::size_t> again = link(enc.symbols);
  return symbols_to_frame(plan, again, frame);
}

}  // namespace ssk
