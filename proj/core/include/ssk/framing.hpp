#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ssk/huffman.hpp"

namespace ssk {

/// Frame-based operation parameters. The frame size must be at least the
/// longest codeword so a frame always decodes to at least one symbol.
struct FramePlan {
  int frame_bits = 100;  // F
  const PrefixCodebook* codebook = nullptr;

  int l_max() const { return codebook->max_len(); }
  void validate() const;
};

/// Receiver-side verdict for one frame.
struct FrameVerdict {
  int recovered_bits = 0;   // length of the re-encoded bit string
  bool ed_flag = false;     // length fell outside [F, F + L_max - 1]
  int bit_errors = 0;       // wrong or missing payload bits vs the truth
  bool frame_error = false; // any payload bit wrong
};

struct FrameEncoding {
  std::vector<std::size_t> symbols;  // codebook indices
  int borrowed = 0;                  // next-frame bits used to finish the last codeword
};

/// Maps one frame of bits to symbols. A trailing fragment is completed with
/// the minimum number of bits from next_bits; when those run out (end of
/// stream) the remainder is zero-padded.
FrameEncoding frame_to_symbols(const FramePlan& plan, const BitString& frame,
                               const BitString& next_bits);

/// Re-encodes detected symbols, truncates to the frame payload, discards the
/// extra borrowed bits, and applies the length-window error-detection rule.
FrameVerdict symbols_to_frame(const FramePlan& plan, std::span<const std::size_t> detected,
                              const BitString& true_frame);

enum class ArqMode { off, paper, real };

/// One channel pass: detected symbol indices for transmitted ones.
using SymbolLink = std::function<std::vector<std::size_t>(std::span<const std::size_t>)>;

/// Sends one frame through the link and applies the selected ARQ behaviour:
/// off = single shot; paper = a flagged frame counts as corrected (the
/// idealization that the first retransmission always succeeds); real = one
/// independent retransmission, re-detected and re-checked.
FrameVerdict run_arq(const FramePlan& plan, const SymbolLink& link, const BitString& frame,
                     const BitString& next_bits, ArqMode mode);

}  // namespace ssk
