# Licensed under AGPL v3 or later

from unittest import TestCase

from motif_pool.types.override import override_type
from motif_pool.types.ratio import ratio_type
from motif_pool.types.seeds import seed_list_type


class TestSeedListType(TestCase):
    def test_valid(self):
        for text, expected in (
                ('1', [0]),
                ('3', [0, 1, 2]),
                ('3-5', [3, 4, 5]),
                ('7-7', [7]),
                ('1,5,9', [1, 5, 9]),
                ('4,2', [4, 2]),
                ):
            self.assertEqual(seed_list_type(text), expected)

    def test_invalid(self):
        for text in ('', '0', '5-3', '1,', '-1', 'a', '1, 2'):
            with self.assertRaises(ValueError):
                seed_list_type(text)


class TestOverrideType(TestCase):
    def test_valid(self):
        for text, expected in (
                ('mu=0.1', ('mu', 0.1)),
                ('pooler=mincut', ('pooler', 'mincut')),
                ('global_skip=true', ('global_skip', True)),
                ('seeds=[1, 2]', ('seeds', [1, 2])),
                ('dataset.community_size=20', ('dataset.community_size', 20)),
                ('dataset.path=', ('dataset.path', None)),
                ):
            self.assertEqual(override_type(text), expected)

    def test_invalid(self):
        for text in ('mu', '=1', 'Mu=1', 'a.b.c=1', 'seeds=[1, 2'):
            with self.assertRaises(ValueError):
                override_type(text)


class TestRatioType(TestCase):
    def test_some(self):
        self.assertEqual(ratio_type('0.25'), 0.25)
        for text in ('0', '1', '1.5', '-0.1', 'x'):
            with self.assertRaises(ValueError):
                ratio_type(text)
