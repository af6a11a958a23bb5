#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bpn/error.hpp"

namespace bpn::text
{

struct line
{
    std::size_t number;
    std::vector<std::string> tokens;
    std::string comment; // text after '#', without the marker
};

// Splits into whitespace-separated tokens; '#' starts a comment running to the
// end of the line. Lines that are empty after stripping are still returned
// when they carry a comment.
inline std::vector<line> split_lines( std::string_view text )
{
    std::vector<line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while ( pos <= text.size() )
    {
        auto nl = text.find( '\n', pos );
        auto raw = text.substr( pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos );
        ++number;
        line l{ number, {}, {} };
        if ( auto hash = raw.find( '#' ); hash != std::string_view::npos )
        {
            l.comment = std::string( raw.substr( hash + 1 ) );
            raw = raw.substr( 0, hash );
        }
        std::istringstream in{ std::string( raw ) };
        for ( std::string tok; in >> tok; )
            l.tokens.push_back( std::move( tok ) );
        if ( !l.tokens.empty() || !l.comment.empty() )
            out.push_back( std::move( l ) );
        if ( nl == std::string_view::npos )
            break;
        pos = nl + 1;
    }
    return out;
}

inline void expect_arity( const line& l, std::size_t n )
{
    if ( l.tokens.size() != n )
        throw parse_error( "'" + l.tokens.front() + "' expects " + std::to_string( n - 1 ) + " argument(s), got " +
                               std::to_string( l.tokens.size() - 1 ),
                           l.number );
}

inline bool parse_bit( const std::string& token, std::size_t line_number )
{
    if ( token == "0" )
        return false;
    if ( token == "1" )
        return true;
    throw parse_error( "expected 0 or 1, got '" + token + "'", line_number );
}

inline std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw parse_error( "cannot open '" + path + "'" );
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file( const std::string& path, std::string_view content )
{
    std::ofstream out( path, std::ios::binary );
    if ( !out )
        throw std::runtime_error( "cannot write '" + path + "'" );
    out << content;
}

} // namespace bpn::text
