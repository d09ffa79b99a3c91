# Licensed under AGPL v3 or later

from unittest import TestCase

from motif_pool.shared.summary import format_mean_std, mean_std


class TestMeanStdFormatter(TestCase):
    def test_some(self):
        for values, expected in (
                ([1.0], '1.000 ± 0.000'),
                ([1.0, 1.0, 1.0], '1.000 ± 0.000'),
                ([0.0, 1.0], '0.500 ± 0.707'),
                ([0.894, 0.894], '0.894 ± 0.000'),
                ([2, 4, 4, 4, 5, 5, 7, 9], '5.000 ± 2.138'),
                ):
            received = format_mean_std(values)
            self.assertEqual(received, expected)

    def test_sample_std(self):
        mean, std = mean_std([1.0, 3.0])
        self.assertEqual(mean, 2.0)
        self.assertAlmostEqual(std, 2 ** 0.5, places=12)

    def test_empty(self):
        with self.assertRaises(ValueError):
            mean_std([])
