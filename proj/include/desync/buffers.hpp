#pragma once

#include <functional>
#include <span>
#include <vector>

#include "desync/term.hpp"

namespace desync {

/// h -> h'. Throws Error for a channel that is already hatted.
ChannelId hat_channel(ChannelId c);
/// h' -> h; identity on base channels.
ChannelId unhat_channel(ChannelId c);

using ChannelFunction = std::function<ChannelId(ChannelId)>;

/// Wraps `root` in a renaming that applies `f` to its input channels only.
/// Returns `root` unchanged when it has no input channels. Throws Error when
/// `root` is not simple.
Term rename_input_channels(const RecursiveSpec& spec, const Term& root, const ChannelFunction& f);
/// As rename_input_channels, for output channels.
Term rename_output_channels(const RecursiveSpec& spec, const Term& root, const ChannelFunction& f);

/// Empty buffer of the given kind reading on `input` and writing on its
/// hatted twin. `data` defaults to the channel's declared data.
Term make_buffer(const Signature& sig, ChannelId input, BufferKind kind, std::vector<DatumId> data = {});

/// Parallel composition of one empty buffer per channel; ε for no channels.
Term buffer_bank(const Signature& sig, std::span<const ChannelId> channels, BufferKind kind);

}  // namespace desync
