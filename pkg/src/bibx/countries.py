"""Embedded country table: canonical name, ISO alpha-2 code, centroid.

Used by the affiliation parser (country extraction from the last token of
an address string) and by the world-map renderer (circle placement).
The table can be overridden by a file of `name<TAB>code<TAB>lat<TAB>lon`
lines plus optional `alias<TAB>code` lines.
"""

from __future__ import annotations

import unicodedata

# name, ISO alpha-2, centroid latitude, centroid longitude
_COUNTRIES = [
    ("Afghanistan", "AF", 33.9, 67.7),
    ("Albania", "AL", 41.2, 20.2),
    ("Algeria", "DZ", 28.0, 1.7),
    ("Angola", "AO", -11.2, 17.9),
    ("Argentina", "AR", -38.4, -63.6),
    ("Armenia", "AM", 40.1, 45.0),
    ("Australia", "AU", -25.3, 133.8),
    ("Austria", "AT", 47.5, 14.6),
    ("Azerbaijan", "AZ", 40.1, 47.6),
    ("Bahrain", "BH", 26.0, 50.6),
    ("Bangladesh", "BD", 23.7, 90.4),
    ("Belarus", "BY", 53.7, 27.9),
    ("Belgium", "BE", 50.5, 4.5),
    ("Benin", "BJ", 9.3, 2.3),
    ("Bolivia", "BO", -16.3, -63.6),
    ("Bosnia and Herzegovina", "BA", 43.9, 17.7),
    ("Botswana", "BW", -22.3, 24.7),
    ("Brazil", "BR", -14.2, -51.9),
    ("Brunei", "BN", 4.5, 114.7),
    ("Bulgaria", "BG", 42.7, 25.5),
    ("Burkina Faso", "BF", 12.2, -1.6),
    ("Cambodia", "KH", 12.6, 105.0),
    ("Cameroon", "CM", 7.4, 12.4),
    ("Canada", "CA", 56.1, -106.3),
    ("Chile", "CL", -35.7, -71.5),
    ("China", "CN", 35.9, 104.2),
    ("Colombia", "CO", 4.6, -74.3),
    ("Costa Rica", "CR", 9.7, -83.8),
    ("Croatia", "HR", 45.1, 15.2),
    ("Cuba", "CU", 21.5, -77.8),
    ("Cyprus", "CY", 35.1, 33.4),
    ("Czech Republic", "CZ", 49.8, 15.5),
    ("Denmark", "DK", 56.3, 9.5),
    ("Dominican Republic", "DO", 18.7, -70.2),
    ("Ecuador", "EC", -1.8, -78.2),
    ("Egypt", "EG", 26.8, 30.8),
    ("El Salvador", "SV", 13.8, -88.9),
    ("Estonia", "EE", 58.6, 25.0),
    ("Eswatini", "SZ", -26.5, 31.5),
    ("Ethiopia", "ET", 9.1, 40.5),
    ("Fiji", "FJ", -17.7, 178.1),
    ("Finland", "FI", 61.9, 25.7),
    ("France", "FR", 46.2, 2.2),
    ("Georgia", "GE", 42.3, 43.4),
    ("Germany", "DE", 51.2, 10.5),
    ("Ghana", "GH", 7.9, -1.0),
    ("Greece", "GR", 39.1, 21.8),
    ("Guatemala", "GT", 15.8, -90.2),
    ("Honduras", "HN", 15.2, -86.2),
    ("Hong Kong", "HK", 22.4, 114.1),
    ("Hungary", "HU", 47.2, 19.5),
    ("Iceland", "IS", 64.96, -19.0),
    ("India", "IN", 20.6, 79.0),
    ("Indonesia", "ID", -0.8, 113.9),
    ("Iran", "IR", 32.4, 53.7),
    ("Iraq", "IQ", 33.2, 43.7),
    ("Ireland", "IE", 53.4, -8.2),
    ("Israel", "IL", 31.0, 34.9),
    ("Italy", "IT", 41.9, 12.6),
    ("Ivory Coast", "CI", 7.5, -5.5),
    ("Jamaica", "JM", 18.1, -77.3),
    ("Japan", "JP", 36.2, 138.3),
    ("Jordan", "JO", 30.6, 36.2),
    ("Kazakhstan", "KZ", 48.0, 66.9),
    ("Kenya", "KE", -0.0, 37.9),
    ("Kuwait", "KW", 29.3, 47.5),
    ("Kyrgyzstan", "KG", 41.2, 74.8),
    ("Laos", "LA", 19.9, 102.5),
    ("Latvia", "LV", 56.9, 24.6),
    ("Lebanon", "LB", 33.9, 35.9),
    ("Libya", "LY", 26.3, 17.2),
    ("Lithuania", "LT", 55.2, 23.9),
    ("Luxembourg", "LU", 49.8, 6.1),
    ("Macau", "MO", 22.2, 113.5),
    ("Madagascar", "MG", -18.8, 47.0),
    ("Malawi", "MW", -13.3, 34.3),
    ("Malaysia", "MY", 4.2, 101.9),
    ("Mali", "ML", 17.6, -4.0),
    ("Malta", "MT", 35.9, 14.4),
    ("Mexico", "MX", 23.6, -102.6),
    ("Moldova", "MD", 47.4, 28.4),
    ("Mongolia", "MN", 46.9, 103.8),
    ("Montenegro", "ME", 42.7, 19.4),
    ("Morocco", "MA", 31.8, -7.1),
    ("Mozambique", "MZ", -18.7, 35.5),
    ("Myanmar", "MM", 21.9, 95.9),
    ("Namibia", "NA", -22.9, 18.5),
    ("Nepal", "NP", 28.4, 84.1),
    ("Netherlands", "NL", 52.1, 5.3),
    ("New Zealand", "NZ", -40.9, 174.9),
    ("Nicaragua", "NI", 12.9, -85.2),
    ("Niger", "NE", 17.6, 8.1),
    ("Nigeria", "NG", 9.1, 8.7),
    ("North Korea", "KP", 40.3, 127.5),
    ("North Macedonia", "MK", 41.6, 21.7),
    ("Norway", "NO", 60.5, 8.5),
    ("Oman", "OM", 21.5, 55.9),
    ("Pakistan", "PK", 30.4, 69.3),
    ("Panama", "PA", 8.5, -80.8),
    ("Papua New Guinea", "PG", -6.3, 143.9),
    ("Paraguay", "PY", -23.4, -58.4),
    ("Peru", "PE", -9.2, -75.0),
    ("Philippines", "PH", 12.9, 121.8),
    ("Poland", "PL", 51.9, 19.1),
    ("Portugal", "PT", 39.4, -8.2),
    ("Qatar", "QA", 25.4, 51.2),
    ("Romania", "RO", 45.9, 25.0),
    ("Russia", "RU", 61.5, 105.3),
    ("Rwanda", "RW", -1.9, 29.9),
    ("Saudi Arabia", "SA", 23.9, 45.1),
    ("Senegal", "SN", 14.5, -14.5),
    ("Serbia", "RS", 44.0, 21.0),
    ("Singapore", "SG", 1.35, 103.8),
    ("Slovakia", "SK", 48.7, 19.7),
    ("Slovenia", "SI", 46.2, 15.0),
    ("Somalia", "SO", 5.2, 46.2),
    ("South Africa", "ZA", -30.6, 22.9),
    ("South Korea", "KR", 35.9, 127.8),
    ("Spain", "ES", 40.5, -3.7),
    ("Sri Lanka", "LK", 7.9, 80.8),
    ("Sudan", "SD", 12.9, 30.2),
    ("Sweden", "SE", 60.1, 18.6),
    ("Switzerland", "CH", 46.8, 8.2),
    ("Syria", "SY", 34.8, 38.997),
    ("Taiwan", "TW", 23.7, 121.0),
    ("Tajikistan", "TJ", 38.9, 71.3),
    ("Tanzania", "TZ", -6.4, 34.9),
    ("Thailand", "TH", 15.9, 100.99),
    ("Tunisia", "TN", 33.9, 9.5),
    ("Turkey", "TR", 38.96, 35.2),
    ("Turkmenistan", "TM", 38.97, 59.6),
    ("Uganda", "UG", 1.4, 32.3),
    ("Ukraine", "UA", 48.4, 31.2),
    ("United Arab Emirates", "AE", 23.4, 53.8),
    ("United Kingdom", "GB", 55.4, -3.4),
    ("United States", "US", 37.1, -95.7),
    ("Uruguay", "UY", -32.5, -55.8),
    ("Uzbekistan", "UZ", 41.4, 64.6),
    ("Venezuela", "VE", 6.4, -66.6),
    ("Vietnam", "VN", 14.1, 108.3),
    ("Yemen", "YE", 15.6, 48.5),
    ("Zambia", "ZM", -13.1, 27.8),
    ("Zimbabwe", "ZW", -19.0, 29.2),
]

# alias -> ISO code, for vendor-specific address spellings
_ALIASES = {
    "usa": "US",
    "u.s.a.": "US",
    "united states of america": "US",
    "uk": "GB",
    "u.k.": "GB",
    "england": "GB",
    "scotland": "GB",
    "wales": "GB",
    "northern ireland": "GB",
    "great britain": "GB",
    "p.r. china": "CN",
    "pr china": "CN",
    "p. r. china": "CN",
    "peoples r china": "CN",
    "people's republic of china": "CN",
    "republic of china": "TW",
    "republic of korea": "KR",
    "korea": "KR",
    "south korea": "KR",
    "viet nam": "VN",
    "czechia": "CZ",
    "russian federation": "RU",
    "iran, islamic republic of": "IR",
    "the netherlands": "NL",
    "holland": "NL",
    "uae": "AE",
    "türkiye": "TR",
    "turkiye": "TR",
    "cote d'ivoire": "CI",
    "côte d'ivoire": "CI",
    "swaziland": "SZ",
    "macedonia": "MK",
    "burma": "MM",
}


def _fold(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


class CountryTable:
    def __init__(self, rows=None, aliases=None):
        rows = rows if rows is not None else _COUNTRIES
        self.by_code = {code: (name, lat, lon) for name, code, lat, lon in rows}
        self._lookup = {}
        for name, code, _lat, _lon in rows:
            self._lookup[_fold(name).lower()] = code
        for alias, code in (aliases if aliases is not None else _ALIASES).items():
            self._lookup[_fold(alias).lower()] = code

    def code_for(self, raw: str) -> str | None:
        """Resolve a free-text country mention to an ISO code, or None."""
        key = _fold(raw).strip().lower().rstrip(".,;")
        key = " ".join(key.split())
        return self._lookup.get(key)

    def name_for(self, code: str) -> str | None:
        entry = self.by_code.get(code)
        return entry[0] if entry else None

    def centroid(self, code: str) -> tuple[float, float] | None:
        entry = self.by_code.get(code)
        return (entry[1], entry[2]) if entry else None

    @classmethod
    def from_file(cls, path) -> "CountryTable":
        rows, aliases = [], {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) == 4:
                    rows.append((parts[0], parts[1], float(parts[2]), float(parts[3])))
                elif len(parts) == 2:
                    aliases[parts[0].lower()] = parts[1]
        return cls(rows=rows, aliases=aliases)


DEFAULT_TABLE = CountryTable()
