"""Poet detection toolkit: Porter stemming, TF-IDF, chi-square feature
selection and five classifiers (naive Bayes, KNN, SMO-SVM, C4.5, random
forest), with an experiment runner and a command-line interface."""

__version__ = "0.1.0"
