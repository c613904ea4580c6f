#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/lattice.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace clonelab
{

uint8_t flag_of( RelTag tag )
{
  switch ( tag )
  {
  case RelTag::LE:
    return kLE;
  case RelTag::AFF:
    return kAFF;
  case RelTag::GR_NEG:
    return kNEG;
  case RelTag::GR_AND:
    return kAND;
  case RelTag::GR_OR:
    return kOR;
  case RelTag::UNARY3:
    return kUNARY;
  default:
    return 0;
  }
}

namespace
{

constexpr std::array<std::pair<uint8_t, char const*>, 6> kFlagTags = { { { kLE, "LE" },
                                                                         { kAFF, "AFF" },
                                                                         { kNEG, "GR_NEG" },
                                                                         { kAND, "GR_AND" },
                                                                         { kOR, "GR_OR" },
                                                                         { kUNARY, "UNARY3" } } };

/// Letters in printing order.
constexpr std::array<std::pair<uint8_t, char const*>, 6> kLetters = {
    { { kUNARY, "U" }, { kAFF, "A" }, { kNEG, "D" }, { kAND, "E" }, { kOR, "V" }, { kLE, "M" } } };

} // namespace

bool CloneDesc::preserves( RelationId r ) const
{
  switch ( r.tag )
  {
  case RelTag::R0:
    return arm0 == kInfinite || arm0 >= r.m;
  case RelTag::R1:
    return arm1 == kInfinite || arm1 >= r.m;
  default:
    return has( flag_of( r.tag ) );
  }
}

std::string CloneDesc::to_string() const
{
  std::string f;
  for ( auto [bit, tag] : kFlagTags )
  {
    if ( flags & bit )
    {
      if ( !f.empty() )
        f += "+";
      f += tag;
    }
  }
  if ( f.empty() )
    f = "-";
  return f + ":" + level_to_string( arm0 ) + ":" + level_to_string( arm1 );
}

CloneDesc CloneDesc::parse( std::string_view s )
{
  auto c1 = s.find( ':' );
  auto c2 = c1 == std::string_view::npos ? c1 : s.find( ':', c1 + 1 );
  if ( c2 == std::string_view::npos )
    throw InputError( "descriptor must look like flags:arm0:arm1" );
  CloneDesc d;
  auto fl = s.substr( 0, c1 );
  if ( fl != "-" )
  {
    std::size_t start = 0;
    while ( start <= fl.size() )
    {
      auto end = fl.find( '+', start );
      if ( end == std::string_view::npos )
        end = fl.size();
      auto tag = fl.substr( start, end - start );
      bool ok = false;
      for ( auto [bit, t] : kFlagTags )
      {
        if ( tag == t )
        {
          d.flags |= bit;
          ok = true;
        }
      }
      if ( !ok )
        throw InputError( "unknown flag '" + std::string( tag ) + "'" );
      start = end + 1;
    }
  }
  d.arm0 = level_from_string( s.substr( c1 + 1, c2 - c1 - 1 ) );
  d.arm1 = level_from_string( s.substr( c2 + 1 ) );
  return d;
}

bool CloneDesc::operator<( CloneDesc const& o ) const
{
  return std::tie( flags, arm0, arm1 ) < std::tie( o.flags, o.arm0, o.arm1 );
}

CloneDesc bottom()
{
  return { kAllFlags, kInfinite, kInfinite };
}

CloneDesc top()
{
  return { 0, 0, 0 };
}

CloneDesc function_descriptor( BoolFun const& f )
{
  CloneDesc d;
  for ( auto [bit, tag] : kFlagTags )
  {
    RelTag t = bit == kLE ? RelTag::LE
               : bit == kAFF ? RelTag::AFF
               : bit == kNEG ? RelTag::GR_NEG
               : bit == kAND ? RelTag::GR_AND
               : bit == kOR ? RelTag::GR_OR
                            : RelTag::UNARY3;
    if ( preserves_specialized( f, { t } ) )
      d.flags |= bit;
  }
  d.arm0 = arm_level( f, false );
  d.arm1 = arm_level( f, true );
  return d;
}

CloneDesc clone_of( std::vector<BoolFun> const& F )
{
  CloneDesc d = bottom();
  for ( auto const& f : F )
  {
    auto e = function_descriptor( f );
    d.flags &= e.flags;
    d.arm0 = std::min( d.arm0, e.arm0 );
    d.arm1 = std::min( d.arm1, e.arm1 );
  }
  return d;
}

namespace
{

constexpr Level kClip = 3;

Level clip( Level l )
{
  return l == kInfinite ? kInfinite : std::min( l, kClip );
}

struct CanonTable
{
  std::vector<CloneDesc> quaternary;
  std::map<CloneDesc, CloneDesc> memo;
  std::mutex mu;

  CanonTable()
  {
    std::set<CloneDesc> seen;
    for ( uint64_t t = 0; t < 65536; ++t )
      seen.insert( function_descriptor( BoolFun::from_bits( 4, t ) ) );
    quaternary.assign( seen.begin(), seen.end() );
  }
};

CanonTable& canon_table()
{
  static CanonTable table;
  return table;
}

bool satisfies( CloneDesc const& d, CloneDesc const& raw )
{
  auto ge = []( Level a, Level b ) { return a == kInfinite || ( b != kInfinite && a >= b ); };
  return ( d.flags & raw.flags ) == raw.flags && ge( d.arm0, raw.arm0 ) && ge( d.arm1, raw.arm1 );
}

} // namespace

CloneDesc canonicalize( CloneDesc raw )
{
  auto& tab = canon_table();
  CloneDesc clipped{ raw.flags, clip( raw.arm0 ), clip( raw.arm1 ) };
  CloneDesc u;
  {
    std::lock_guard lock( tab.mu );
    auto it = tab.memo.find( clipped );
    if ( it != tab.memo.end() )
      u = it->second;
    else
    {
      u = bottom();
      for ( auto const& d : tab.quaternary )
      {
        if ( !satisfies( d, clipped ) )
          continue;
        u.flags &= d.flags;
        u.arm0 = std::min( u.arm0, d.arm0 );
        u.arm1 = std::min( u.arm1, d.arm1 );
      }
      tab.memo.emplace( clipped, u );
    }
  }
  // Along the four arm chains the other invariants are constant from level 2 on.
  if ( u.arm0 == kClip && raw.arm0 != kInfinite && raw.arm0 > kClip )
    u.arm0 = raw.arm0;
  if ( u.arm1 == kClip && raw.arm1 != kInfinite && raw.arm1 > kClip )
    u.arm1 = raw.arm1;
  return u;
}

bool leq( CloneDesc const& c1, CloneDesc const& c2 )
{
  auto ge = []( Level a, Level b ) { return a == kInfinite || ( b != kInfinite && a >= b ); };
  return ( c1.flags & c2.flags ) == c2.flags && ge( c1.arm0, c2.arm0 ) && ge( c1.arm1, c2.arm1 );
}

CloneDesc meet( CloneDesc const& c1, CloneDesc const& c2 )
{
  return canonicalize( { uint8_t( c1.flags | c2.flags ), std::max( c1.arm0, c2.arm0 ), std::max( c1.arm1, c2.arm1 ) } );
}

CloneDesc join( CloneDesc const& c1, CloneDesc const& c2 )
{
  return canonicalize( { uint8_t( c1.flags & c2.flags ), std::min( c1.arm0, c2.arm0 ), std::min( c1.arm1, c2.arm1 ) } );
}

CloneDesc dual( CloneDesc const& c )
{
  uint8_t f = c.flags & uint8_t( kLE | kAFF | kNEG | kUNARY );
  if ( c.flags & kAND )
    f |= kOR;
  if ( c.flags & kOR )
    f |= kAND;
  return { f, c.arm1, c.arm0 };
}

namespace
{

struct ArmPart
{
  Level a0;
  Level a1;
  unsigned cost;
};

std::string arm_text( Level a0, Level a1 )
{
  auto lv = []( Level l ) { return l == kInfinite ? std::string( "∞" ) : std::to_string( l ); };
  if ( a0 == 0 && a1 == 0 )
    return "";
  if ( a0 == 1 && a1 == 1 )
    return "P";
  if ( a0 == 1 && a1 == 0 )
    return "P_0";
  if ( a0 == 0 && a1 == 1 )
    return "P_1";
  if ( a1 == 0 )
    return "T^" + lv( a0 ) + "_0";
  if ( a0 == 0 )
    return "T^" + lv( a1 ) + "_1";
  if ( a1 == 1 )
    return "PT^" + lv( a0 ) + "_0";
  if ( a0 == 1 )
    return "PT^" + lv( a1 ) + "_1";
  return "T^" + lv( a0 ) + "_0T^" + lv( a1 ) + "_1";
}

std::string letters( uint8_t flags )
{
  std::string s;
  for ( auto [bit, l] : kLetters )
  {
    if ( flags & bit )
      s += l;
  }
  return s;
}

} // namespace

std::string name( CloneDesc const& c )
{
  if ( canonicalize( c ) != c )
    return c.to_string();
  if ( c == bottom() )
    return "⊥";
  if ( c == top() )
    return "⊤";
  std::vector<ArmPart> parts = { { 0, 0, 0 }, { 1, 1, 1 }, { 1, 0, 1 }, { 0, 1, 1 } };
  bool const hi0 = c.arm0 >= 2;
  bool const hi1 = c.arm1 >= 2;
  if ( hi0 )
    parts.push_back( { c.arm0, 0, 1 } );
  if ( hi1 )
    parts.push_back( { 0, c.arm1, 1 } );
  if ( hi0 )
    parts.push_back( { c.arm0, 1, 2 } );
  if ( hi1 )
    parts.push_back( { 1, c.arm1, 2 } );
  if ( hi0 && hi1 )
    parts.push_back( { c.arm0, c.arm1, 2 } );

  // flag subsets of c.flags ordered by size, then by letter order
  std::vector<uint8_t> subsets;
  for ( unsigned s = 0; s < 64; ++s )
  {
    if ( ( s & c.flags ) == s )
      subsets.push_back( uint8_t( s ) );
  }
  auto letter_key = []( uint8_t s ) {
    std::string k;
    for ( auto [bit, l] : kLetters )
      k.push_back( ( s & bit ) ? '0' : '1' );
    return k;
  };
  std::stable_sort( subsets.begin(), subsets.end(), [&]( uint8_t a, uint8_t b ) {
    int pa = std::popcount( unsigned( a ) ), pb = std::popcount( unsigned( b ) );
    if ( pa != pb )
      return pa < pb;
    return letter_key( a ) < letter_key( b );
  } );

  for ( unsigned total = 1; total <= 8; ++total )
  {
    for ( auto const& p : parts )
    {
      if ( p.cost > total )
        continue;
      for ( auto s : subsets )
      {
        if ( unsigned( std::popcount( unsigned( s ) ) ) + p.cost != total )
          continue;
        if ( p.a0 > c.arm0 && c.arm0 != kInfinite )
          continue;
        if ( p.a1 > c.arm1 && c.arm1 != kInfinite )
          continue;
        if ( canonicalize( { s, p.a0, p.a1 } ) == c )
          return letters( s ) + arm_text( p.a0, p.a1 );
      }
    }
  }
  return c.to_string();
}

CloneDesc named( std::string_view s )
{
  if ( s == "⊤" || s == "TOP" )
    return top();
  if ( s == "⊥" || s == "BOT" )
    return bottom();
  if ( s.find( ':' ) != std::string_view::npos )
    return canonicalize( CloneDesc::parse( s ) );
  CloneDesc raw = top();
  auto raise = [&]( Level& arm, Level l ) {
    if ( arm != kInfinite && ( l == kInfinite || l > arm ) )
      arm = l;
  };
  std::size_t i = 0;
  auto starts = [&]( std::string_view p ) { return s.substr( i, p.size() ) == p; };
  while ( i < s.size() )
  {
    bool matched = false;
    for ( auto [bit, l] : kLetters )
    {
      if ( starts( l ) )
      {
        raw.flags |= bit;
        i += 1;
        matched = true;
        break;
      }
    }
    if ( matched )
      continue;
    if ( starts( "P_0" ) || starts( "P₀" ) )
    {
      raise( raw.arm0, 1 );
      i += starts( "P_0" ) ? 3 : std::string_view( "P₀" ).size();
      continue;
    }
    if ( starts( "P_1" ) || starts( "P₁" ) )
    {
      raise( raw.arm1, 1 );
      i += starts( "P_1" ) ? 3 : std::string_view( "P₁" ).size();
      continue;
    }
    if ( starts( "P" ) )
    {
      raise( raw.arm0, 1 );
      raise( raw.arm1, 1 );
      i += 1;
      continue;
    }
    if ( starts( "T^" ) )
    {
      i += 2;
      Level lv;
      if ( starts( "∞" ) )
      {
        lv = kInfinite;
        i += std::string_view( "∞" ).size();
      }
      else if ( starts( "inf" ) )
      {
        lv = kInfinite;
        i += 3;
      }
      else
      {
        std::size_t j = i;
        while ( j < s.size() && s[j] >= '0' && s[j] <= '9' )
          ++j;
        if ( j == i )
          throw InputError( "expected a level after T^ in clone name '" + std::string( s ) + "'" );
        lv = level_from_string( s.substr( i, j - i ) );
        if ( lv == 0 )
          throw InputError( "arm levels in names start at 1" );
        i = j;
      }
      if ( !starts( "_0" ) && !starts( "_1" ) )
        throw InputError( "expected _0 or _1 in clone name '" + std::string( s ) + "'" );
      bool alpha = s[i + 1] == '1';
      i += 2;
      raise( alpha ? raw.arm1 : raw.arm0, lv );
      continue;
    }
    throw InputError( "unknown clone name '" + std::string( s ) + "'" );
  }
  return canonicalize( raw );
}

std::vector<CloneDesc> all_clones( Level max_level )
{
  std::set<CloneDesc> out;
  std::vector<Level> levels;
  for ( Level l = 0; l <= max_level; ++l )
    levels.push_back( l );
  levels.push_back( kInfinite );
  for ( unsigned f = 0; f < 64; ++f )
  {
    for ( auto a0 : levels )
    {
      for ( auto a1 : levels )
        out.insert( canonicalize( { uint8_t( f ), a0, a1 } ) );
    }
  }
  std::vector<CloneDesc> v;
  for ( auto const& c : out )
  {
    bool ok0 = c.arm0 == kInfinite || c.arm0 <= max_level;
    bool ok1 = c.arm1 == kInfinite || c.arm1 <= max_level;
    if ( ok0 && ok1 )
      v.push_back( c );
  }
  return v;
}

std::vector<NamedClone> const& named_clones()
{
  static std::vector<NamedClone> const table = [] {
    std::vector<NamedClone> t = {
        { "⊤", { "AND", "NOT" }, {} },
        { "⊥", {}, {} },
        { "M", { "AND", "OR", "ZERO", "ONE" }, {} },
        { "A", { "XOR", "ONE" }, {} },
        { "D", { "MAJ", "NOT" }, {} },
        { "E", { "AND", "ZERO", "ONE" }, {} },
        { "V", { "OR", "ZERO", "ONE" }, {} },
        { "U", { "NOT", "ZERO" }, {} },
        { "P_1", { "AND", "IMP" }, {} },
        { "P_0", { "OR", "NOTIMPLIES" }, {} },
        { "T^2_1", { "THETA_3_2", "IMP" }, {} },
        { "T^3_1", { "THETA_4_2", "IMP" }, {} },
        { "T^4_1", { "THETA_5_2", "IMP" }, {} },
        { "T^2_0", { "THETA_3_2", "NOTIMPLIES" }, {} },
        { "T^3_0", { "THETA_4_3", "NOTIMPLIES" }, {} },
        { "T^4_0", { "THETA_5_4", "NOTIMPLIES" }, {} },
        { "T^∞_1", { "IMP" }, {} },
        { "T^∞_0", { "NOTIMPLIES" }, {} },
    };
    for ( auto& nc : t )
    {
      std::vector<BoolFun> fs;
      for ( auto const& g : nc.generators )
        fs.push_back( *builtin_function( g ) );
      nc.desc = clone_of( fs );
    }
    return t;
  }();
  return table;
}

Membership member( BoolFun const& f, CloneDesc const& clone )
{
  Membership res{ true, std::nullopt, std::nullopt, {} };
  unsigned const n = f.arity();
  Level arm[2] = { kInfinite, kInfinite };
  bool arm_known[2] = { false, false };
  for ( auto const& r : family_Rn( n ) )
  {
    res.consulted.push_back( r );
    if ( !clone.preserves( r ) )
      continue;
    bool ok;
    if ( r.tag == RelTag::R0 || r.tag == RelTag::R1 )
    {
      int const a = r.tag == RelTag::R1;
      if ( !arm_known[a] )
      {
        arm[a] = arm_level( f, a );
        arm_known[a] = true;
      }
      ok = arm[a] == kInfinite || arm[a] >= r.m;
    }
    else
    {
      ok = preserves_specialized( f, r );
    }
    if ( !ok )
    {
      res.member = false;
      res.separator = r;
      res.witness = refute( f, r );
      return res;
    }
  }
  return res;
}

Membership member( BoolFun const& f, std::vector<BoolFun> const& F )
{
  return member( f, clone_of( F ) );
}

} // namespace clonelab
