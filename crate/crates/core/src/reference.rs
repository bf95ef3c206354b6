//! Published reference values for genus 0 through 30.
//!
//! Columns: genus, `2 F_g` (blank below genus 2), `n_g`, `1 + 3 * 2^(g-3)`
//! (blank below genus 3), and the Catalan number `C_g`. These are fixture
//! data copied from the published table, not computed here.

pub struct ReferenceRow {
    pub g: u32,
    pub lower: Option<u64>,
    pub count: u64,
    pub upper: Option<u64>,
    pub catalan: u64,
}

const fn row(
    g: u32,
    lower: Option<u64>,
    count: u64,
    upper: Option<u64>,
    catalan: u64,
) -> ReferenceRow {
    ReferenceRow {
        g,
        lower,
        count,
        upper,
        catalan,
    }
}

pub const REFERENCE_MAX_GENUS: u32 = 30;

#[rustfmt::skip]
pub const REFERENCE_TABLE: [ReferenceRow; 31] = [
    row(0, None, 1, None, 1),
    row(1, None, 1, None, 1),
    row(2, Some(2), 2, None, 2),
    row(3, Some(4), 4, Some(4), 5),
    row(4, Some(6), 7, Some(7), 14),
    row(5, Some(10), 12, Some(13), 42),
    row(6, Some(16), 23, Some(25), 132),
    row(7, Some(26), 39, Some(49), 429),
    row(8, Some(42), 67, Some(97), 1430),
    row(9, Some(68), 118, Some(193), 4862),
    row(10, Some(110), 204, Some(385), 16796),
    row(11, Some(178), 343, Some(769), 58786),
    row(12, Some(288), 592, Some(1537), 208012),
    row(13, Some(466), 1001, Some(3073), 742900),
    row(14, Some(754), 1693, Some(6145), 2674440),
    row(15, Some(1220), 2857, Some(12289), 9694845),
    row(16, Some(1974), 4806, Some(24577), 35357670),
    row(17, Some(3194), 8045, Some(49153), 129644790),
    row(18, Some(5168), 13467, Some(98305), 477638700),
    row(19, Some(8362), 22464, Some(196609), 1767263190),
    row(20, Some(13530), 37396, Some(393217), 6564120420),
    row(21, Some(21892), 62194, Some(786433), 24466267020),
    row(22, Some(35422), 103246, Some(1572865), 91482563640),
    row(23, Some(57314), 170963, Some(3145729), 343059613650),
    row(24, Some(92736), 282828, Some(6291457), 1289904147324),
    row(25, Some(150050), 467224, Some(12582913), 4861946401452),
    row(26, Some(242786), 770832, Some(25165825), 18367353072152),
    row(27, Some(392836), 1270267, Some(50331649), 69533550916004),
    row(28, Some(635622), 2091030, Some(100663297), 263747951750360),
    row(29, Some(1028458), 3437839, Some(201326593), 1002242216651368),
    row(30, Some(1664080), 5646773, Some(402653185), 3814986502092304),
];

/// Reference `n_g`, if tabulated.
pub fn reference_count(g: u32) -> Option<u64> {
    REFERENCE_TABLE.get(g as usize).map(|r| r.count)
}
