#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace srpmc::models {

/// Stream declaration forwarded towards the listeners.
enum class TalkerAttribute : std::int32_t { None = 0, TA = 1, TF = 2 };

/// Listener response; NU_LA means nothing received or transmitted.
enum class ListenerAttribute : std::int32_t { NU_LA = 0, LR = 1, LAF = 2, LRF = 3 };

/// Per-port reservation decision; NU_Re means no decision yet.
enum class ReservationStatus : std::int32_t { NU_Re = 0, Yes = 1, No = 2 };

/// Per-listener entry of an LNR vector.
enum class LnrStatus : std::int32_t { Unknown = 0, Ready = 1, Failed = 2 };

inline constexpr std::array<ListenerAttribute, 4> kAllListenerAttributes{
    ListenerAttribute::NU_LA, ListenerAttribute::LR, ListenerAttribute::LAF, ListenerAttribute::LRF};

/// Combines two listener responses into the one a bridge forwards:
/// LR+LR=LR, LAF+LAF=LAF, LR+LAF=LRF, anything+LRF=LRF, NU_LA is the identity.
constexpr ListenerAttribute merge_listener_attributes(ListenerAttribute a, ListenerAttribute b) noexcept
{
    using LA = ListenerAttribute;
    if (a == LA::NU_LA)
        return b;
    if (b == LA::NU_LA)
        return a;
    if (a == LA::LRF || b == LA::LRF)
        return LA::LRF;
    return a == b ? a : LA::LRF;
}

/// Entry-wise LNR merge. Ready/Failed overwrite Unknown; a Ready/Failed
/// conflict resolves to Failed (unreachable with a single stream).
constexpr LnrStatus merge_lnr(LnrStatus a, LnrStatus b) noexcept
{
    return static_cast<std::int32_t>(a) >= static_cast<std::int32_t>(b) ? a : b;
}

std::string_view to_string(TalkerAttribute v) noexcept;
std::string_view to_string(ListenerAttribute v) noexcept;
std::string_view to_string(ReservationStatus v) noexcept;
std::string_view to_string(LnrStatus v) noexcept;

}  // namespace srpmc::models
