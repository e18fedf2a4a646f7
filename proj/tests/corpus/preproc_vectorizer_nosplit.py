import pandas as pd
from sklearn.feature_extraction.text import CountVectorizer
from sklearn.naive_bayes import MultinomialNB

journals = pd.read_csv('journals.csv')
journalsFinal = journals.dropna(subset=['text'])

wordsVectorizer = CountVectorizer().fit(journalsFinal['text'])
wordsVector = wordsVectorizer.transform(journalsFinal['text'])
classifier = MultinomialNB()
classifier.fit(wordsVector, journalsFinal['label'])
