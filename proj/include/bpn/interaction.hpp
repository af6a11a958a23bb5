#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bpn/error.hpp"

namespace bpn
{

// The eight partial maps {0,1} -> {0,1} a place/transition pair may carry.
// The enumerator order is the canonical order used everywhere a choice
// between interactions has to be made deterministically.
enum class interaction : std::uint8_t
{
    nop,
    inp,
    out,
    set,
    res,
    swap,
    used,
    free,
};

inline constexpr std::array<interaction, 8> all_interactions = {
    interaction::nop, interaction::inp,  interaction::out,  interaction::set,
    interaction::res, interaction::swap, interaction::used, interaction::free,
};

inline constexpr std::array<std::string_view, 8> interaction_names = {
    "nop", "inp", "out", "set", "res", "swap", "used", "free",
};

inline constexpr std::string_view name_of( interaction i )
{
    return interaction_names[static_cast<std::size_t>( i )];
}

inline std::optional<interaction> interaction_from_name( std::string_view name )
{
    for ( std::size_t k = 0; k < interaction_names.size(); ++k )
        if ( interaction_names[k] == name )
            return static_cast<interaction>( k );
    return std::nullopt;
}

// -1 marks an undefined cell.
namespace detail
{
inline constexpr std::array<std::array<int, 2>, 8> interaction_table = { {
    { 0, 1 },   // nop
    { -1, 0 },  // inp
    { 1, -1 },  // out
    { 1, 1 },   // set
    { 0, 0 },   // res
    { 1, 0 },   // swap
    { -1, 1 },  // used
    { 0, -1 },  // free
} };
} // namespace detail

inline constexpr std::optional<bool> apply_interaction( interaction i, bool x )
{
    const int r = detail::interaction_table[static_cast<std::size_t>( i )][x ? 1 : 0];
    if ( r < 0 )
        return std::nullopt;
    return r == 1;
}

inline constexpr bool defined_at( interaction i, bool x )
{
    return apply_interaction( i, x ).has_value();
}

inline constexpr bool is_total( interaction i )
{
    return defined_at( i, false ) && defined_at( i, true );
}

// The unique bit at which a partial interaction is undefined.
inline constexpr std::optional<bool> undefined_at( interaction i )
{
    if ( !defined_at( i, false ) )
        return false;
    if ( !defined_at( i, true ) )
        return true;
    return std::nullopt;
}

// Image of an interaction under the bit-flip isomorphism.
inline constexpr interaction flipped( interaction i )
{
    switch ( i )
    {
    case interaction::inp: return interaction::out;
    case interaction::out: return interaction::inp;
    case interaction::set: return interaction::res;
    case interaction::res: return interaction::set;
    case interaction::used: return interaction::free;
    case interaction::free: return interaction::used;
    default: return i;
    }
}

// A boolean type of nets: a subset of the eight interactions, stored as a
// bitmask in canonical order.
class net_type
{
    std::uint8_t _mask = 0;

public:
    constexpr net_type() = default;
    constexpr explicit net_type( std::uint8_t mask ) : _mask{ mask } {}
    constexpr net_type( std::initializer_list<interaction> items )
    {
        for ( auto i : items )
            _mask |= bit( i );
    }

    static constexpr std::uint8_t bit( interaction i )
    {
        return static_cast<std::uint8_t>( 1u << static_cast<unsigned>( i ) );
    }

    [[nodiscard]] constexpr std::uint8_t mask() const { return _mask; }
    [[nodiscard]] constexpr bool empty() const { return _mask == 0; }
    [[nodiscard]] constexpr bool contains( interaction i ) const { return ( _mask & bit( i ) ) != 0; }
    [[nodiscard]] constexpr std::size_t size() const
    {
        std::size_t n = 0;
        for ( auto i : all_interactions )
            n += contains( i ) ? 1 : 0;
        return n;
    }

    [[nodiscard]] std::vector<interaction> members() const
    {
        std::vector<interaction> out;
        for ( auto i : all_interactions )
            if ( contains( i ) )
                out.push_back( i );
        return out;
    }

    [[nodiscard]] constexpr net_type flipped() const
    {
        net_type t;
        for ( auto i : all_interactions )
            if ( contains( i ) )
                t._mask |= bit( bpn::flipped( i ) );
        return t;
    }

    [[nodiscard]] std::string to_string() const
    {
        std::string s;
        for ( auto i : all_interactions )
        {
            if ( !contains( i ) )
                continue;
            if ( !s.empty() )
                s += ',';
            s += name_of( i );
        }
        return s;
    }

    friend constexpr bool operator==( net_type a, net_type b ) = default;
};

// Parses "nop,set,swap,free". The empty string yields the empty type.
inline net_type parse_net_type( std::string_view spec )
{
    std::uint8_t mask = 0;
    if ( spec.empty() )
        return net_type{};
    while ( true )
    {
        auto comma = spec.find( ',' );
        auto token = spec.substr( 0, comma );
        while ( !token.empty() && token.front() == ' ' )
            token.remove_prefix( 1 );
        while ( !token.empty() && token.back() == ' ' )
            token.remove_suffix( 1 );
        auto i = interaction_from_name( token );
        if ( !i )
            throw parse_error( "unknown interaction '" + std::string( token ) + "' in type specification" );
        mask |= net_type::bit( *i );
        if ( comma == std::string_view::npos )
            break;
        spec.remove_prefix( comma + 1 );
    }
    return net_type{ mask };
}

// Every decision procedure rejects the empty type.
inline void require_nonempty( net_type t )
{
    if ( t.empty() )
        throw invalid_input( "the empty net type is not accepted by decision operations" );
}

struct type_isomorphism_map
{
    bool flips_bits = false;
    std::array<interaction, 8> image{};

    [[nodiscard]] interaction operator()( interaction i ) const { return image[static_cast<std::size_t>( i )]; }
    [[nodiscard]] bool operator()( bool x ) const { return flips_bits ? !x : x; }
};

// Only two state bijections exist on {0,1}; each induces exactly one
// interaction map, so trying both is exhaustive.
inline std::optional<type_isomorphism_map> type_isomorphism( net_type from, net_type to )
{
    type_isomorphism_map m;
    if ( from == to )
    {
        for ( auto i : all_interactions )
            m.image[static_cast<std::size_t>( i )] = i;
        return m;
    }
    if ( from.flipped() == to )
    {
        m.flips_bits = true;
        for ( auto i : all_interactions )
            m.image[static_cast<std::size_t>( i )] = flipped( i );
        return m;
    }
    return std::nullopt;
}

inline net_type sigma1_type()
{
    return { interaction::nop, interaction::set, interaction::swap, interaction::free };
}

inline std::vector<net_type> sigma2_types()
{
    net_type base{ interaction::nop, interaction::set, interaction::swap, interaction::used };
    std::vector<net_type> out;
    for ( std::uint8_t extra : { std::uint8_t{ 0 }, net_type::bit( interaction::res ), net_type::bit( interaction::free ),
                                 static_cast<std::uint8_t>( net_type::bit( interaction::res ) | net_type::bit( interaction::free ) ) } )
        out.emplace_back( static_cast<std::uint8_t>( base.mask() | extra ) );
    return out;
}

} // namespace bpn
